// Pure view-model builders so rendering logic is testable without a DOM.

import type { NBest, TurnResult } from './api.js';

export interface NBestBar {
  word: string;
  combinedScore: number;
  acousticCost: number;
  widthPct: number; // relative plausibility, best hypothesis = 100
  top: boolean;
}

/** Lower scores are better; bars shrink exponentially with the score gap. */
export function nbestBars(nbest: NBest): NBestBar[] {
  if (nbest.hypotheses.length === 0) return [];
  const best = nbest.hypotheses[0].combined_score;
  return nbest.hypotheses.map((h, i) => ({
    word: h.word,
    combinedScore: h.combined_score,
    acousticCost: h.acoustic_cost,
    widthPct: Math.max(2, Math.round(100 * Math.exp(best - h.combined_score))),
    top: i === 0,
  }));
}

export interface TranscriptEntry {
  who: 'you' | 'system';
  text: string;
  phonemes?: string;
  rejected?: boolean;
}

export function userEntry(label: string, rejected = false): TranscriptEntry {
  return { who: 'you', text: rejected ? `${label} (not recognized)` : label, rejected };
}

export function systemEntry(turn: { response_text: string; phonemes: string[] }): TranscriptEntry {
  return { who: 'system', text: turn.response_text, phonemes: turn.phonemes.join(' ') };
}

export type CaptureStatus = 'idle' | 'recording' | 'uploading';

export interface ConsoleState {
  sessionId: string | null;
  status: CaptureStatus;
  transcript: TranscriptEntry[];
  latestNBest: NBest | null;
  agendaSize: number;
  finished: boolean;
  errorBanner: string | null;
}

export function initialState(): ConsoleState {
  return {
    sessionId: null,
    status: 'idle',
    transcript: [],
    latestNBest: null,
    agendaSize: 0,
    finished: false,
    errorBanner: null,
  };
}

/** Fold one completed turn into the console state. */
export function applyTurn(state: ConsoleState, userLabel: string, turn: TurnResult): ConsoleState {
  const rejected = turn.nbest?.rejected ?? false;
  return {
    ...state,
    status: 'idle',
    transcript: [...state.transcript, userEntry(userLabel, rejected), systemEntry(turn)],
    latestNBest: turn.nbest,
    agendaSize: turn.agenda_size,
    finished: turn.finished,
    errorBanner: null,
  };
}

export function applyError(state: ConsoleState, message: string): ConsoleState {
  return { ...state, status: 'idle', errorBanner: message };
}

export function describeCapture(durationSeconds: number, truncated: boolean): string {
  const base = `${durationSeconds.toFixed(1)} s captured`;
  return truncated ? `${base} (truncated to 10 s)` : base;
}
