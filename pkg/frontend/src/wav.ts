// PCM helpers: everything the capture path needs that is testable off-browser.

export const TARGET_RATE = 16000;
export const MAX_CAPTURE_SECONDS = 10;

/** Linear-interpolation resample of mono float samples to the target rate. */
export function downsample(input: Float32Array, inputRate: number, targetRate = TARGET_RATE): Float32Array {
  if (inputRate === targetRate) return Float32Array.from(input);
  const nOut = Math.round((input.length * targetRate) / inputRate);
  const out = new Float32Array(nOut);
  for (let i = 0; i < nOut; i++) {
    const pos = (i * inputRate) / targetRate;
    const lo = Math.floor(pos);
    const hi = Math.min(lo + 1, input.length - 1);
    const frac = pos - lo;
    out[i] = input[lo] * (1 - frac) + input[hi] * frac;
  }
  return out;
}

export function floatTo16BitPCM(samples: Float32Array): Int16Array {
  const out = new Int16Array(samples.length);
  for (let i = 0; i < samples.length; i++) {
    const clamped = Math.max(-1, Math.min(1, samples[i]));
    out[i] = Math.round(clamped * 32767);
  }
  return out;
}

/** 16-bit PCM mono RIFF/WAVE bytes, little-endian throughout. */
export function encodeWav(samples: Int16Array, sampleRate = TARGET_RATE): Uint8Array {
  const buffer = new ArrayBuffer(44 + samples.length * 2);
  const view = new DataView(buffer);
  const writeStr = (off: number, str: string) => {
    for (let i = 0; i < str.length; i++) view.setUint8(off + i, str.charCodeAt(i));
  };
  writeStr(0, 'RIFF');
  view.setUint32(4, 36 + samples.length * 2, true);
  writeStr(8, 'WAVEfmt ');
  view.setUint32(16, 16, true);
  view.setUint16(20, 1, true); // PCM
  view.setUint16(22, 1, true); // mono
  view.setUint32(24, sampleRate, true);
  view.setUint32(28, sampleRate * 2, true);
  view.setUint16(32, 2, true);
  view.setUint16(34, 16, true);
  writeStr(36, 'data');
  view.setUint32(40, samples.length * 2, true);
  for (let i = 0; i < samples.length; i++) view.setInt16(44 + i * 2, samples[i], true);
  return new Uint8Array(buffer);
}

export interface CapturedUtterance {
  wav: Uint8Array;
  durationSeconds: number;
  truncated: boolean;
}

/** Device-rate float chunks -> one 16 kHz 16-bit WAV, capped at 10 s. */
export function finalizeCapture(chunks: Float32Array[], deviceRate: number): CapturedUtterance {
  let total = 0;
  for (const c of chunks) total += c.length;
  const joined = new Float32Array(total);
  let off = 0;
  for (const c of chunks) {
    joined.set(c, off);
    off += c.length;
  }
  let mono = downsample(joined, deviceRate);
  const maxSamples = MAX_CAPTURE_SECONDS * TARGET_RATE;
  const truncated = mono.length > maxSamples;
  if (truncated) mono = mono.subarray(0, maxSamples);
  return {
    wav: encodeWav(floatTo16BitPCM(mono)),
    durationSeconds: mono.length / TARGET_RATE,
    truncated,
  };
}
