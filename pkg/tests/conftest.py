import struct

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def make_wav(
    samples=None,
    *,
    rate=16000,
    channels=1,
    bits=16,
    audio_format=1,
    n=None,
) -> bytes:
    """Hand-assembled RIFF/WAVE bytes, independent of any writer under test."""
    if samples is None:
        samples = np.zeros(n or rate, dtype=np.int16)
    samples = np.asarray(samples)
    if samples.dtype.kind == "f":
        samples = np.clip(np.round(samples * 32767.0), -32768, 32767).astype("<i2")
    else:
        samples = samples.astype("<i2")
    payload = samples.tobytes()
    block_align = channels * bits // 8
    fmt = struct.pack(
        "<HHIIHH", audio_format, channels, rate, rate * block_align, block_align, bits
    )
    chunks = b"fmt " + struct.pack("<I", len(fmt)) + fmt
    chunks += b"data" + struct.pack("<I", len(payload)) + payload
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks


def sine_wav(freq=440.0, seconds=1.0, rate=16000, amp=0.5) -> bytes:
    t = np.arange(int(seconds * rate)) / rate
    return make_wav(amp * np.sin(2 * np.pi * freq * t), rate=rate)


@pytest.fixture
def tiny_wav_bytes():
    return sine_wav(seconds=0.1)
