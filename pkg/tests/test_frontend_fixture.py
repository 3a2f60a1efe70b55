"""Ingestion contract with the web console: its recorded-capture fixture
must decode through the primary WAV path. Skips when the secondary
component has not generated its fixture."""

from pathlib import Path

import numpy as np
import pytest

from kidvoice.audio import decode_wav

FIXTURE = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures" / "capture.wav"


@pytest.mark.skipif(not FIXTURE.exists(), reason="web console fixture not built")
def test_console_capture_decodes():
    buf = decode_wav(FIXTURE.read_bytes())
    assert buf.sample_rate == 16000
    assert len(buf.samples) == 8000  # 0.5 s capture
    # the capture is a 440 Hz tone; 2 Hz bins on a 0.5 s buffer
    spectrum = np.abs(np.fft.rfft(buf.samples))
    assert int(np.argmax(spectrum)) == 220
