/** Typed client for the game service's JSON endpoints.
 *
 * Every request/response pair is appended to `log`, so tests can assert
 * that everything the UI displays traces back to a service response.
 */

export interface Profile {
  gender: string;
  age_group: string;
  education: string;
  city: string;
  state: string;
}

export type ClueSource = 'suggested' | 'edited' | 'authored';

export interface ClueSpec {
  text: string;
  source: ClueSource;
}

export interface CardView {
  card_id: string;
  topic: string;
  secret_word: string;
  synonyms: string[];
  clues: ClueSpec[];
}

export interface GameView {
  game_id: string;
  state: string;
  step_completed: number;
  published: boolean;
  theme: string | null;
  topics: string[];
  profile_query: string[][] | null;
  cards: CardView[];
}

export interface SuggestionView {
  sentence: string;
  relation: string;
  weight: number;
}

export interface SuggestionsResponse {
  suggestions: SuggestionView[];
  related_concepts: string[];
}

export interface SessionView {
  session_id: string;
  game_id: string;
  topic: string | null;
  card_id: string | null;
  clue_count: number;
  revealed: number[];
  guesses: { text: string; outcome: string }[];
  solved: boolean;
}

export interface RevealResponse {
  index: number;
  text: string;
}

export interface GuessResponse {
  outcome: 'correct' | 'open';
  solved: boolean;
}

export interface LogEntry {
  method: string;
  path: string;
  status: number;
  response: unknown;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

const RETRYABLE_ATTEMPTS = 2;

export class GameApi {
  readonly log: LogEntry[] = [];

  constructor(private baseUrl: string) {}

  private async call<T>(method: string, path: string, body?: unknown,
                        idempotent = false): Promise<T> {
    let lastError: unknown;
    const attempts = idempotent ? RETRYABLE_ATTEMPTS : 1;
    for (let attempt = 0; attempt < attempts; attempt++) {
      let response: Response;
      try {
        response = await fetch(this.baseUrl + path, {
          method,
          headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
          body: body === undefined ? undefined : JSON.stringify(body),
        });
      } catch (err) {
        lastError = err; // network failure: retry idempotent calls
        continue;
      }
      const payload = (await response.json()) as T & { error?: string };
      this.log.push({ method, path, status: response.status, response: payload });
      if (!response.ok) {
        throw new ApiError(response.status, payload.error ?? 'request failed');
      }
      return payload;
    }
    throw lastError instanceof Error ? lastError : new Error(String(lastError));
  }

  createGame(editorProfile: Profile): Promise<GameView> {
    return this.call('POST', '/games', { editor_profile: editorProfile });
  }

  getGame(gameId: string): Promise<GameView> {
    return this.call('GET', `/games/${gameId}`, undefined, true);
  }

  wizardStep(gameId: string, step: number, payload: unknown): Promise<GameView> {
    return this.call('POST', `/games/${gameId}/wizard/${step}`, payload);
  }

  suggestions(gameId: string, secret: string,
              synonyms: string[]): Promise<SuggestionsResponse> {
    const params = new URLSearchParams({ secret });
    if (synonyms.length) params.set('synonyms', synonyms.join(','));
    return this.call('GET', `/games/${gameId}/suggestions?${params}`, undefined,
                     true);
  }

  createSession(gameId: string, playerProfile: Profile): Promise<SessionView> {
    return this.call('POST', '/sessions',
                     { game_id: gameId, player_profile: playerProfile });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.call('GET', `/sessions/${sessionId}`, undefined, true);
  }

  roll(sessionId: string): Promise<SessionView> {
    return this.call('POST', `/sessions/${sessionId}/roll`, {});
  }

  reveal(sessionId: string, index: number): Promise<RevealResponse> {
    return this.call('POST', `/sessions/${sessionId}/reveal`, { index });
  }

  guess(sessionId: string, text: string): Promise<GuessResponse> {
    return this.call('POST', `/sessions/${sessionId}/guess`, { guess: text });
  }

  /** True when a displayed string occurs somewhere in a logged response. */
  traces(displayed: string): boolean {
    return this.log.some((entry) =>
      JSON.stringify(entry.response).includes(JSON.stringify(displayed).slice(1, -1)));
  }
}
