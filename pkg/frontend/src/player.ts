/** Player view state: dice, clue reveals, and guessing.
 *
 * The dice animation is client-side decoration; the topic always comes
 * from the service's roll. Only service-revealed clues are displayable,
 * guessing stays disabled until one clue is revealed, and a non-matching
 * guess leaves the card open: the view never labels a guess incorrect.
 */

import { GameApi, Profile, SessionView } from './api';

export type DicePhase = 'idle' | 'rolling' | 'settled';

export class PlayerError extends Error {}

export class Player {
  session: SessionView;
  dicePhase: DicePhase = 'idle';
  /** Clue texts by 1-based index, exactly as the service revealed them. */
  revealedTexts = new Map<number, string>();
  /** Outcome of the last guess: 'correct' | 'open' | null. */
  lastOutcome: 'correct' | 'open' | null = null;

  private constructor(private api: GameApi, session: SessionView) {
    this.session = session;
  }

  static async start(api: GameApi, gameId: string,
                     playerProfile: Profile): Promise<Player> {
    return new Player(api, await api.createSession(gameId, playerProfile));
  }

  /** Letters cycled while the dice "spins"; purely presentational. */
  diceFrames(topics: string[], frames: number, seed = 1): string[] {
    let state = seed;
    const letters: string[] = [];
    for (let i = 0; i < frames; i++) {
      state = (state * 48271) % 2147483647;
      const topic = topics[state % Math.max(topics.length, 1)] ?? '?';
      letters.push(topic.charAt(0).toUpperCase());
    }
    return letters;
  }

  get topic(): string | null {
    return this.session.topic;
  }

  get clueCount(): number {
    return this.session.clue_count;
  }

  get canGuess(): boolean {
    return this.revealedTexts.size > 0 && !this.session.solved;
  }

  async roll(): Promise<string> {
    this.dicePhase = 'rolling';
    try {
      this.session = await this.api.roll(this.session.session_id);
    } finally {
      this.dicePhase = 'settled';
    }
    this.revealedTexts.clear();
    this.lastOutcome = null;
    if (this.session.topic === null) throw new PlayerError('roll returned no topic');
    return this.session.topic;
  }

  isRevealed(index: number): boolean {
    return this.revealedTexts.has(index);
  }

  async reveal(index: number): Promise<string> {
    if (this.isRevealed(index)) {
      throw new PlayerError(`clue ${index} already revealed`);
    }
    const response = await this.api.reveal(this.session.session_id, index);
    this.revealedTexts.set(response.index, response.text);
    return response.text;
  }

  /** Latest revealed clue, shown in the speech balloon. */
  get balloonText(): string | null {
    let latest: string | null = null;
    for (const text of this.revealedTexts.values()) latest = text;
    return latest;
  }

  async guess(text: string): Promise<'correct' | 'open'> {
    if (!this.canGuess) {
      throw new PlayerError('reveal a clue before guessing');
    }
    const response = await this.api.guess(this.session.session_id, text);
    this.lastOutcome = response.outcome;
    this.session.solved = response.solved;
    this.session.guesses.push({ text, outcome: response.outcome });
    return response.outcome;
  }

  /** Re-pull the authoritative session after a connection hiccup. */
  async resync(): Promise<void> {
    this.session = await this.api.getSession(this.session.session_id);
  }
}
