// DOM wiring for the dialog console: session lifecycle, push-to-talk,
// typed-word fallback, n-best bars, transcript, error banner.

import { ApiClient, TurnResult } from './api.js';
import { PermissionDenied, PushToTalkRecorder } from './recorder.js';
import {
  applyError,
  applyTurn,
  ConsoleState,
  describeCapture,
  initialState,
  nbestBars,
  systemEntry,
} from './view.js';

const api = new ApiClient('');
const recorder = new PushToTalkRecorder();
let state: ConsoleState = initialState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function render(): void {
  const transcript = el<HTMLDivElement>('transcript');
  transcript.innerHTML = '';
  for (const entry of state.transcript) {
    const row = document.createElement('div');
    row.className = `turn ${entry.who}${entry.rejected ? ' rejected' : ''}`;
    const text = document.createElement('span');
    text.textContent = `${entry.who === 'you' ? 'you' : 'system'}: ${entry.text}`;
    row.appendChild(text);
    if (entry.phonemes) {
      const ph = document.createElement('span');
      ph.className = 'phonemes';
      ph.textContent = ` /${entry.phonemes}/`;
      row.appendChild(ph);
    }
    transcript.appendChild(row);
  }
  transcript.scrollTop = transcript.scrollHeight;

  const bars = el<HTMLDivElement>('nbest');
  bars.innerHTML = '';
  if (state.latestNBest) {
    if (state.latestNBest.rejected) {
      const note = document.createElement('div');
      note.className = 'rejected-note';
      note.textContent = 'not recognized - please repeat';
      bars.appendChild(note);
    }
    for (const bar of nbestBars(state.latestNBest)) {
      const row = document.createElement('div');
      row.className = `bar${bar.top ? ' top' : ''}`;
      const fill = document.createElement('div');
      fill.className = 'fill';
      fill.style.width = `${bar.widthPct}%`;
      const label = document.createElement('span');
      label.textContent = `${bar.word}  ${bar.combinedScore.toFixed(3)}`;
      row.appendChild(fill);
      row.appendChild(label);
      bars.appendChild(row);
    }
  }

  const banner = el<HTMLDivElement>('banner');
  banner.textContent = state.errorBanner ?? '';
  banner.hidden = state.errorBanner === null;

  el<HTMLSpanElement>('agenda-size').textContent = state.sessionId
    ? `${state.agendaSize} question(s) left${state.finished ? ' - finished' : ''}`
    : 'no session';

  const disabled = !state.sessionId || state.finished || state.status !== 'idle';
  el<HTMLButtonElement>('talk').disabled = disabled;
  el<HTMLInputElement>('typed-word').disabled = disabled;
  el<HTMLButtonElement>('send-word').disabled = disabled;
  el<HTMLButtonElement>('talk').textContent =
    state.status === 'recording' ? 'release to send' : 'hold to talk';
}

async function startSession(): Promise<void> {
  try {
    const created = await api.createSession('default');
    state = initialState();
    state.sessionId = created.session_id;
    state.agendaSize = created.agenda_size;
    state.transcript = [systemEntry(created)];
  } catch (err) {
    state = applyError(state, describeError(err));
  }
  render();
}

function describeError(err: unknown): string {
  if (err && typeof err === 'object' && 'code' in err && 'detail' in err) {
    const e = err as { status: number; code: string; detail: string };
    return `${e.code} (${e.status}): ${e.detail}`;
  }
  return String(err);
}

async function submitTurn(label: string, send: () => Promise<TurnResult>): Promise<void> {
  if (!state.sessionId) return;
  state = { ...state, status: 'uploading' };
  render();
  try {
    state = applyTurn(state, label, await send());
  } catch (err) {
    state = applyError(state, describeError(err));
  }
  render();
}

async function onTalkPress(): Promise<void> {
  if (state.status !== 'idle') return;
  try {
    await recorder.start();
    state = { ...state, status: 'recording', errorBanner: null };
  } catch (err) {
    if (err instanceof PermissionDenied) {
      state = applyError(state, 'microphone permission denied - use the typed fallback');
    } else {
      state = applyError(state, describeError(err));
    }
  }
  render();
}

async function onTalkRelease(): Promise<void> {
  if (state.status !== 'recording' || !state.sessionId) return;
  const capture = await recorder.stop();
  await submitTurn(describeCapture(capture.durationSeconds, capture.truncated), () =>
    api.turnWithAudio(state.sessionId!, capture.wav),
  );
}

async function onSendWord(): Promise<void> {
  const input = el<HTMLInputElement>('typed-word');
  const word = input.value.trim().toLowerCase();
  if (!word || !state.sessionId) return;
  input.value = '';
  await submitTurn(word, () => api.turnWithWord(state.sessionId!, word));
}

export function bind(): void {
  el<HTMLButtonElement>('start-session').addEventListener('click', () => void startSession());
  const talk = el<HTMLButtonElement>('talk');
  talk.addEventListener('mousedown', () => void onTalkPress());
  talk.addEventListener('mouseup', () => void onTalkRelease());
  talk.addEventListener('mouseleave', () => {
    if (state.status === 'recording') {
      recorder.cancel();
      state = { ...state, status: 'idle' };
      render();
    }
  });
  el<HTMLButtonElement>('send-word').addEventListener('click', () => void onSendWord());
  el<HTMLInputElement>('typed-word').addEventListener('keydown', (e) => {
    if (e.key === 'Enter') void onSendWord();
  });
  render();
}

if (typeof document !== 'undefined' && document.getElementById('start-session')) {
  bind();
}
