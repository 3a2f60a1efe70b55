// Push-to-talk microphone capture (browser only). Raw float chunks are
// collected off a ScriptProcessorNode and finalized into a 16 kHz WAV.

import { CapturedUtterance, finalizeCapture, MAX_CAPTURE_SECONDS } from './wav.js';

export class PermissionDenied extends Error {}

export class PushToTalkRecorder {
  private stream?: MediaStream;
  private context?: AudioContext;
  private processor?: ScriptProcessorNode;
  private chunks: Float32Array[] = [];
  private captured = 0;

  get recording(): boolean {
    return this.context !== undefined;
  }

  async start(): Promise<void> {
    if (this.recording) return;
    try {
      this.stream = await navigator.mediaDevices.getUserMedia({
        audio: { echoCancellation: true, noiseSuppression: false, channelCount: 1 },
      });
    } catch (err) {
      throw new PermissionDenied(`microphone unavailable: ${String(err)}`);
    }
    this.context = new AudioContext();
    const source = this.context.createMediaStreamSource(this.stream);
    this.processor = this.context.createScriptProcessor(4096, 1, 1);
    this.chunks = [];
    this.captured = 0;
    const capLimit = (MAX_CAPTURE_SECONDS + 1) * this.context.sampleRate;
    this.processor.onaudioprocess = (e) => {
      if (this.captured >= capLimit) return; // hard stop; finalize truncates exactly
      const data = e.inputBuffer.getChannelData(0);
      this.chunks.push(Float32Array.from(data));
      this.captured += data.length;
    };
    source.connect(this.processor);
    this.processor.connect(this.context.destination);
  }

  async stop(): Promise<CapturedUtterance> {
    if (!this.context) throw new Error('not recording');
    const rate = this.context.sampleRate;
    this.processor?.disconnect();
    this.stream?.getTracks().forEach((t) => t.stop());
    await this.context.close();
    this.context = undefined;
    this.processor = undefined;
    this.stream = undefined;
    return finalizeCapture(this.chunks, rate);
  }

  cancel(): void {
    this.processor?.disconnect();
    this.stream?.getTracks().forEach((t) => t.stop());
    void this.context?.close();
    this.context = undefined;
    this.processor = undefined;
    this.stream = undefined;
    this.chunks = [];
  }
}
