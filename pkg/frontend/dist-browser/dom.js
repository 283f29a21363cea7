/** DOM rendering for the editor wizard and the player module. Views fully
 * re-render from their state object after every confirmed service response;
 * nothing on screen is fabricated client-side except the dice spin. */
import { Player } from './player';
import { THEMES, Wizard } from './wizard';
function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function splitList(value) {
    return value.split(',').map((s) => s.trim()).filter((s) => s.length > 0);
}
export class EditorView {
    constructor(root, wizard, onPublished) {
        this.wizard = wizard;
        this.onPublished = onPublished;
        this.root = root;
        this.render();
    }
    render() {
        this.root.innerHTML = '';
        const container = el('div', 'wizard');
        container.appendChild(this.renderNav());
        if (this.wizard.error) {
            container.appendChild(el('p', 'error-banner', this.wizard.error));
        }
        if (this.wizard.hasUnsavedEdits) {
            container.appendChild(el('p', 'unsaved-flag', 'unsaved suggestion edits'));
        }
        container.appendChild(this.wizard.published
            ? this.renderPublished() : this.renderStep());
        this.root.appendChild(container);
    }
    renderNav() {
        const nav = el('nav', 'wizard-nav');
        const labels = ['Profile', 'Theme', 'Topics', 'Secret words', 'Clues',
            'Review', 'Publish'];
        labels.forEach((label, idx) => {
            const marker = el('span', 'wizard-nav-step', `${idx + 1}. ${label}`);
            if (idx + 1 === this.wizard.currentStep && !this.wizard.published) {
                marker.classList.add('active');
            }
            if (idx + 1 <= this.wizard.game.step_completed) {
                marker.classList.add('done');
            }
            nav.appendChild(marker);
        });
        return nav;
    }
    async act(action) {
        try {
            await action();
        }
        catch {
            // wizard.error carries the message; the form re-renders with it
        }
        this.render();
    }
    renderStep() {
        switch (this.wizard.currentStep) {
            case 1: return this.renderProfileStep();
            case 2: return this.renderThemeStep();
            case 3: return this.renderTopicsStep();
            case 4: return this.renderCardsStep();
            case 5: return this.renderCluesStep();
            case 6: return this.renderReviewStep();
            default: return this.renderPublishStep();
        }
    }
    renderProfileStep() {
        const section = el('section', 'step step-profile');
        section.appendChild(el('h2', undefined, 'Step 1: population profile'));
        section.appendChild(el('p', undefined, 'Comma-separated allowed values; leave a field empty to accept all.'));
        const fields = [
            ['genders', 'e.g. M,F'], ['age-groups', 'e.g. 13_17,18_29'],
            ['educations', 'e.g. 2_completo'], ['cities', ''], ['states', 'e.g. SP'],
        ];
        const inputs = [];
        for (const [name, placeholder] of fields) {
            const label = el('label', undefined, name.replace('-', ' ') + ' ');
            const input = el('input', `profile-${name}`);
            input.placeholder = placeholder;
            inputs.push(input);
            label.appendChild(input);
            section.appendChild(label);
        }
        const submit = el('button', 'submit-step', 'Use this profile');
        submit.addEventListener('click', () => this.act(() => this.wizard.submitProfile(inputs.map((i) => splitList(i.value)))));
        section.appendChild(submit);
        return section;
    }
    renderThemeStep() {
        const section = el('section', 'step step-theme');
        section.appendChild(el('h2', undefined, 'Step 2: transversal theme'));
        const select = el('select', 'theme-select');
        for (const theme of THEMES) {
            const option = el('option', undefined, theme);
            option.value = theme;
            select.appendChild(option);
        }
        section.appendChild(select);
        const submit = el('button', 'submit-step', 'Choose theme');
        submit.addEventListener('click', () => this.act(() => this.wizard.submitTheme(select.value)));
        section.appendChild(submit);
        return section;
    }
    renderTopicsStep() {
        const section = el('section', 'step step-topics');
        section.appendChild(el('h2', undefined, 'Step 3: dice topics (1-6)'));
        const input = el('input', 'topics-input');
        input.placeholder = 'comma-separated topics';
        section.appendChild(input);
        const submit = el('button', 'submit-step', 'Set topics');
        submit.addEventListener('click', () => this.act(() => this.wizard.submitTopics(splitList(input.value))));
        section.appendChild(submit);
        return section;
    }
    renderCardsStep() {
        const section = el('section', 'step step-cards');
        section.appendChild(el('h2', undefined, 'Step 4: secret words and synonyms'));
        const rows = [];
        for (const topic of this.wizard.game.topics) {
            const row = el('div', 'card-row');
            row.appendChild(el('strong', undefined, topic));
            const secret = el('input', 'secret-input');
            secret.placeholder = 'secret word';
            const synonyms = el('input', 'synonyms-input');
            synonyms.placeholder = 'synonyms, comma-separated';
            row.appendChild(secret);
            row.appendChild(synonyms);
            rows.push({ topic, secret, synonyms });
            section.appendChild(row);
        }
        const submit = el('button', 'submit-step', 'Create cards');
        submit.addEventListener('click', () => this.act(() => this.wizard.submitCards(rows.map((r) => ({
            topic: r.topic,
            secretWord: r.secret.value.trim(),
            synonyms: splitList(r.synonyms.value),
        })))));
        section.appendChild(submit);
        return section;
    }
    renderCluesStep() {
        const section = el('section', 'step step-clues');
        section.appendChild(el('h2', undefined, 'Step 5: clues per card'));
        for (const card of this.wizard.game.cards) {
            const block = el('div', 'card-clues');
            block.dataset.cardId = card.card_id;
            block.appendChild(el('h3', undefined, `${card.topic}: ${card.secret_word}`));
            const items = this.wizard.suggestions.get(card.card_id);
            if (items === undefined) {
                const load = el('button', 'load-suggestions', 'Suggest clues');
                load.addEventListener('click', () => this.act(() => this.wizard.loadSuggestions(card.card_id)));
                block.appendChild(load);
            }
            else {
                const list = el('ul', 'suggestion-list');
                items.forEach((item, index) => {
                    const entry = el('li', 'suggestion');
                    entry.appendChild(el('span', 'suggestion-sentence', item.sentence));
                    entry.appendChild(el('em', 'suggestion-state', item.action ?? 'pending'));
                    for (const action of ['accept', 'reject']) {
                        const button = el('button', `suggestion-${action}`, action);
                        button.addEventListener('click', () => {
                            this.wizard.setSuggestionAction(card.card_id, index, action);
                            this.render();
                        });
                        entry.appendChild(button);
                    }
                    const editButton = el('button', 'suggestion-edit', 'edit');
                    editButton.addEventListener('click', () => {
                        // Inline edit: pre-filled with the suggestion text.
                        this.wizard.setSuggestionAction(card.card_id, index, 'edit');
                        this.render();
                    });
                    entry.appendChild(editButton);
                    if (item.action === 'edit') {
                        const editInput = el('input', 'suggestion-edit-input');
                        editInput.value = item.editedText ?? item.sentence;
                        editInput.addEventListener('change', () => {
                            this.wizard.setSuggestionAction(card.card_id, index, 'edit', editInput.value);
                            this.render();
                        });
                        entry.appendChild(editInput);
                    }
                    list.appendChild(entry);
                });
                block.appendChild(list);
            }
            const chosen = el('ol', 'chosen-clues');
            for (const spec of this.wizard.clueSpecs(card.card_id)) {
                chosen.appendChild(el('li', `clue-${spec.source}`, spec.text));
            }
            block.appendChild(chosen);
            const authorInput = el('input', 'author-clue-input');
            authorInput.placeholder = 'write a clue';
            const authorButton = el('button', 'author-clue', 'Add clue');
            authorButton.addEventListener('click', () => {
                if (authorInput.value.trim()) {
                    this.wizard.addAuthoredClue(card.card_id, authorInput.value.trim());
                    this.render();
                }
            });
            block.appendChild(authorInput);
            block.appendChild(authorButton);
            section.appendChild(block);
        }
        const submit = el('button', 'submit-step submit-clues', 'Save clues');
        submit.addEventListener('click', () => this.act(() => this.wizard.submitClues()));
        section.appendChild(submit);
        return section;
    }
    renderReviewStep() {
        const section = el('section', 'step step-review');
        section.appendChild(el('h2', undefined, 'Step 6: review'));
        section.appendChild(el('p', undefined, `Theme: ${this.wizard.game.theme ?? ''}`));
        for (const card of this.wizard.game.cards) {
            section.appendChild(el('p', 'review-card', `${card.topic} / ${card.secret_word}: ${card.clues.length} clue(s)`));
        }
        const submit = el('button', 'submit-step', 'Looks right');
        submit.addEventListener('click', () => this.act(() => this.wizard.confirmReview()));
        return section.appendChild(submit), section;
    }
    renderPublishStep() {
        const section = el('section', 'step step-publish');
        section.appendChild(el('h2', undefined, 'Step 7: publish'));
        const submit = el('button', 'submit-step publish-button', 'Publish game');
        submit.addEventListener('click', () => this.act(async () => {
            await this.wizard.publish();
            this.onPublished?.();
        }));
        section.appendChild(submit);
        return section;
    }
    renderPublished() {
        const section = el('section', 'published-banner');
        section.appendChild(el('h2', undefined, 'Game published'));
        section.appendChild(el('p', 'published-game-id', this.wizard.game.game_id));
        return section;
    }
}
const DICE_FRAME_COUNT = 12;
const DICE_FRAME_MS = 40;
export class PlayerView {
    constructor(root, player, topics) {
        this.player = player;
        this.topics = topics;
        this.root = root;
        this.render();
    }
    render() {
        this.root.innerHTML = '';
        const container = el('div', 'player');
        container.appendChild(this.renderDice());
        if (this.player.topic) {
            container.appendChild(el('p', 'current-topic', this.player.topic));
            container.appendChild(this.renderClues());
            container.appendChild(this.renderGuess());
        }
        this.root.appendChild(container);
    }
    renderDice() {
        const section = el('section', 'dice-area');
        const dice = el('button', 'dice');
        dice.textContent = this.player.topic
            ? this.player.topic.charAt(0).toUpperCase() : '?';
        dice.addEventListener('click', () => this.spinAndRoll(dice));
        section.appendChild(dice);
        return section;
    }
    async spinAndRoll(dice) {
        // Letter cycling is decoration; the service's roll decides the topic.
        const frames = this.player.diceFrames(this.topics, DICE_FRAME_COUNT);
        for (const letter of frames) {
            dice.textContent = letter;
            await new Promise((resolve) => setTimeout(resolve, DICE_FRAME_MS));
        }
        await this.player.roll();
        this.render();
    }
    renderClues() {
        const section = el('section', 'clue-area');
        const balloon = el('p', 'balloon', this.player.balloonText ?? '');
        section.appendChild(balloon);
        const panel = el('div', 'clue-panel');
        panel.appendChild(el('h3', undefined, 'Set of clues'));
        for (let index = 1; index <= this.player.clueCount; index++) {
            const button = el('button', 'clue-number', String(index));
            if (this.player.isRevealed(index)) {
                button.disabled = true;
                button.classList.add('revealed');
            }
            button.addEventListener('click', async () => {
                await this.player.reveal(index);
                this.render();
            });
            panel.appendChild(button);
        }
        section.appendChild(panel);
        return section;
    }
    renderGuess() {
        const section = el('section', 'guess-area');
        const input = el('input', 'guess-input');
        input.placeholder = 'your guess';
        input.disabled = !this.player.canGuess;
        const submit = el('button', 'guess-submit', 'Guess');
        submit.disabled = !this.player.canGuess;
        submit.addEventListener('click', async () => {
            if (input.value.trim()) {
                await this.player.guess(input.value.trim());
                this.render();
            }
        });
        section.appendChild(input);
        section.appendChild(submit);
        if (this.player.lastOutcome === 'correct') {
            section.appendChild(el('p', 'outcome-banner outcome-correct', 'correct'));
        }
        else if (this.player.lastOutcome === 'open') {
            // Open is neutral: no incorrect/red styling anywhere.
            section.appendChild(el('p', 'outcome-banner outcome-open', 'keep trying'));
        }
        return section;
    }
}
export async function mountEditor(root, api, profile, onPublished) {
    const wizard = await Wizard.create(api, profile);
    const view = new EditorView(root, wizard, () => onPublished?.(wizard.game.game_id));
    return { view, wizard };
}
export async function mountPlayer(root, api, gameId, profile) {
    const game = await api.getGame(gameId);
    const player = await Player.start(api, gameId, profile);
    const view = new PlayerView(root, player, game.topics);
    return { view, player };
}
