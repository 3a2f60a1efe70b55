// Typed client for the /api/v1 surface; fetch is injectable for tests.

export interface Hypothesis {
  word: string;
  acoustic_cost: number;
  lm_logprob: number;
  combined_score: number;
  best_warp?: number;
}

export interface NBest {
  hypotheses: Hypothesis[];
  rejected: boolean;
}

export interface SessionCreated {
  session_id: string;
  opening_intent: string;
  response_text: string;
  phonemes: string[];
  agenda_size: number;
  finished: boolean;
}

export interface TurnResult {
  response_text: string;
  phonemes: string[];
  agenda_size: number;
  finished: boolean;
  intent: string;
  matched_handler: string | null;
  turn_index: number;
  nbest: NBest | null;
}

export interface ApiError {
  status: number;
  code: string;
  detail: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

function toBody(bytes: Uint8Array): ArrayBuffer {
  const copy = new ArrayBuffer(bytes.byteLength);
  new Uint8Array(copy).set(bytes);
  return copy;
}

async function parse<T>(resp: Response): Promise<T> {
  if (resp.ok) return (await resp.json()) as T;
  let code = 'HttpError';
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    code = body.code ?? code;
    detail = body.detail ?? detail;
  } catch {
    /* non-JSON error body */
  }
  throw { status: resp.status, code, detail } satisfies ApiError;
}

export class ApiClient {
  constructor(
    private baseUrl = '',
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  createSession(agenda = 'default'): Promise<SessionCreated> {
    return this.request('/api/v1/sessions', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ agenda }),
    });
  }

  turnWithWord(sessionId: string, word: string): Promise<TurnResult> {
    return this.request(`/api/v1/sessions/${sessionId}/turn`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ word }),
    });
  }

  turnWithAudio(sessionId: string, wav: Uint8Array): Promise<TurnResult> {
    return this.request(`/api/v1/sessions/${sessionId}/turn`, {
      method: 'POST',
      headers: { 'content-type': 'audio/wav' },
      body: toBody(wav),
    });
  }

  recognize(wav: Uint8Array): Promise<NBest> {
    return this.request('/api/v1/recognize', {
      method: 'POST',
      headers: { 'content-type': 'audio/wav' },
      body: toBody(wav),
    });
  }

  history(sessionId: string): Promise<{ session_id: string; finished: boolean; turns: unknown[] }> {
    return this.request(`/api/v1/sessions/${sessionId}/history`, { method: 'GET' });
  }

  private async request<T>(path: string, init: RequestInit): Promise<T> {
    return parse<T>(await this.fetchImpl(this.baseUrl + path, init));
  }
}
