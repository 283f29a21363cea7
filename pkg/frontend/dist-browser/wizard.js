/** Editor wizard view state: seven steps in service order, per-step form
 * data, and a suggestion list whose items the editor accepts, edits, or
 * rejects. The service is the authority on step completion; this state
 * machine only refuses to submit steps out of order and flags unsaved
 * suggestion edits.
 */
export const THEMES = [
    'sexual education',
    'ethics',
    'healthcare',
    'environment',
    'cultural plurality',
    'market and consumers',
];
export class WizardError extends Error {
}
export class Wizard {
    constructor(api, game) {
        this.api = api;
        this.error = null;
        /** Suggestion lists per card id, loaded during step 5. */
        this.suggestions = new Map();
        /** Manually authored clue texts per card id. */
        this.authored = new Map();
        this.dirtyEdits = new Set();
        this.game = game;
    }
    static async create(api, editorProfile) {
        return new Wizard(api, await api.createGame(editorProfile));
    }
    /** Reload a draft from the service, e.g. after a page reload. */
    static async resume(api, gameId) {
        return new Wizard(api, await api.getGame(gameId));
    }
    get currentStep() {
        return this.game.step_completed + 1;
    }
    get published() {
        return this.game.published;
    }
    get hasUnsavedEdits() {
        return this.dirtyEdits.size > 0;
    }
    async submit(step, payload) {
        if (step !== this.currentStep) {
            throw new WizardError(`step ${step} out of order, expected ${this.currentStep}`);
        }
        this.error = null;
        try {
            this.game = await this.api.wizardStep(this.game.game_id, step, payload);
        }
        catch (err) {
            // Surface the fault inline; form state stays as entered.
            this.error = err instanceof Error ? err.message : String(err);
            throw err;
        }
    }
    submitProfile(profileQuery) {
        return this.submit(1, { profile_query: profileQuery });
    }
    submitTheme(theme) {
        return this.submit(2, { theme });
    }
    submitTopics(topics) {
        return this.submit(3, { topics });
    }
    submitCards(cards) {
        return this.submit(4, {
            cards: cards.map((c) => ({
                topic: c.topic,
                secret_word: c.secretWord,
                synonyms: c.synonyms,
            })),
        });
    }
    /** Pull clue suggestions for one card from the live knowledge base. */
    async loadSuggestions(cardId) {
        const card = this.game.cards.find((c) => c.card_id === cardId);
        if (!card)
            throw new WizardError(`unknown card ${cardId}`);
        const response = await this.api.suggestions(this.game.game_id, card.secret_word, card.synonyms);
        const items = response.suggestions.map((s) => ({
            sentence: s.sentence,
            relation: s.relation,
            weight: s.weight,
            action: null,
            editedText: null,
        }));
        this.suggestions.set(cardId, items);
        return items;
    }
    setSuggestionAction(cardId, index, action, editedText) {
        const items = this.suggestions.get(cardId) ?? [];
        const item = items[index];
        if (!item)
            throw new WizardError(`no suggestion ${index} for ${cardId}`);
        item.action = action;
        const key = `${cardId}:${index}`;
        if (action === 'edit') {
            item.editedText = editedText ?? item.sentence;
            this.dirtyEdits.add(key);
        }
        else {
            item.editedText = null;
            this.dirtyEdits.delete(key);
        }
    }
    addAuthoredClue(cardId, text) {
        const list = this.authored.get(cardId) ?? [];
        list.push(text);
        this.authored.set(cardId, list);
    }
    /** Clues a card would carry right now: accepted and edited suggestions in
     * list order, then authored ones. Rejected suggestions contribute
     * nothing; an empty result is valid until step 5 is submitted. */
    clueSpecs(cardId) {
        const specs = [];
        for (const item of this.suggestions.get(cardId) ?? []) {
            if (item.action === 'accept') {
                specs.push({ text: item.sentence, source: 'suggested' });
            }
            else if (item.action === 'edit' && item.editedText) {
                specs.push({ text: item.editedText, source: 'edited' });
            }
        }
        for (const text of this.authored.get(cardId) ?? []) {
            specs.push({ text, source: 'authored' });
        }
        return specs;
    }
    async submitClues() {
        const clues = {};
        for (const card of this.game.cards) {
            clues[card.card_id] = this.clueSpecs(card.card_id);
        }
        await this.submit(5, { clues });
        this.dirtyEdits.clear();
    }
    confirmReview() {
        return this.submit(6, {});
    }
    publish() {
        return this.submit(7, {});
    }
}
