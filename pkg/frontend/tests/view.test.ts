import { describe, expect, it } from 'vitest';

import type { NBest, TurnResult } from '../src/api';
import {
  applyError,
  applyTurn,
  describeCapture,
  initialState,
  nbestBars,
  systemEntry,
  userEntry,
} from '../src/view';

const NBEST: NBest = {
  hypotheses: [
    { word: 'hello', acoustic_cost: 0.2, lm_logprob: -1.9, combined_score: 0.39 },
    { word: 'mama', acoustic_cost: 0.5, lm_logprob: -1.6, combined_score: 0.66 },
    { word: 'bye', acoustic_cost: 0.7, lm_logprob: -2.8, combined_score: 0.98 },
  ],
  rejected: false,
};

function turnFixture(overrides: Partial<TurnResult> = {}): TurnResult {
  return {
    response_text: 'What colour do you like best?',
    phonemes: ['W', 'AH', 'T'],
    agenda_size: 3,
    finished: false,
    intent: 'ask_color',
    matched_handler: 'greet',
    turn_index: 0,
    nbest: NBEST,
    ...overrides,
  };
}

describe('nbestBars', () => {
  it('renders one ranked bar per hypothesis with the top highlighted', () => {
    const bars = nbestBars(NBEST);
    expect(bars).toHaveLength(3);
    expect(bars[0].top).toBe(true);
    expect(bars[0].widthPct).toBe(100);
    expect(bars.slice(1).every((b) => !b.top)).toBe(true);
    expect(bars[0].widthPct).toBeGreaterThan(bars[1].widthPct);
    expect(bars[1].widthPct).toBeGreaterThan(bars[2].widthPct);
  });

  it('handles empty lists', () => {
    expect(nbestBars({ hypotheses: [], rejected: true })).toEqual([]);
  });
});

describe('console state transitions', () => {
  it('a completed turn appends user and system entries', () => {
    let state = initialState();
    state.sessionId = 's1';
    state = applyTurn(state, 'hello', turnFixture());
    expect(state.transcript).toHaveLength(2);
    expect(state.transcript[0]).toEqual(userEntry('hello'));
    expect(state.transcript[1].who).toBe('system');
    expect(state.agendaSize).toBe(3);
    expect(state.errorBanner).toBeNull();
  });

  it('transcript grows by two entries per turn', () => {
    let state = initialState();
    state.sessionId = 's1';
    for (let i = 0; i < 4; i++) state = applyTurn(state, `w${i}`, turnFixture());
    expect(state.transcript).toHaveLength(8);
  });

  it('rejected turns are styled distinctly and still appended', () => {
    let state = initialState();
    state.sessionId = 's1';
    const rejectedTurn = turnFixture({
      intent: 'repeat',
      response_text: 'Could you say that again, please?',
      nbest: { ...NBEST, rejected: true },
    });
    state = applyTurn(state, '1.2 s captured', rejectedTurn);
    expect(state.transcript[0].rejected).toBe(true);
    expect(state.transcript[0].text).toContain('not recognized');
    expect(state.transcript[1].text).toContain('again');
  });

  it('a finished session flags the state', () => {
    let state = initialState();
    state.sessionId = 's1';
    state = applyTurn(state, 'bye', turnFixture({ finished: true, agenda_size: 0 }));
    expect(state.finished).toBe(true);
    expect(state.agendaSize).toBe(0);
  });

  it('errors land in the banner and reset the capture status', () => {
    let state = initialState();
    state.status = 'uploading';
    state = applyError(state, 'SessionFinished (409): session s1 is finished');
    expect(state.errorBanner).toContain('409');
    expect(state.status).toBe('idle');
  });
});

describe('helpers', () => {
  it('system entries join phonemes', () => {
    const entry = systemEntry({ response_text: 'Hi', phonemes: ['HH', 'AY'] });
    expect(entry.phonemes).toBe('HH AY');
  });

  it('capture descriptions note truncation', () => {
    expect(describeCapture(1.04, false)).toBe('1.0 s captured');
    expect(describeCapture(10.0, true)).toContain('truncated');
  });
});
