/** Scripted end-to-end test: the real wizard and player DOM views, in
 * jsdom, against the live game service. Every displayed clue, topic, and
 * outcome must trace back to a logged service response. */

import assert from 'node:assert/strict';
import { spawn, ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { after, before, test } from 'node:test';

import { JSDOM } from 'jsdom';

import { GameApi, Profile } from '../src/api';
import { mountEditor, mountPlayer } from '../src/dom';

const EDITOR: Profile = {
  gender: 'F', age_group: '30_45', education: 'doutorado',
  city: 'São Carlos', state: 'SP',
};
const PLAYER: Profile = {
  gender: 'M', age_group: '13_17', education: '2_incompleto',
  city: 'São Carlos', state: 'SP',
};

const CORPUS = [
  'aids is a(n) sexually transmitted disease$$F$$30_45$$doutorado$$São Carlos$$SP$$1',
  'aids is a(n) serious illness$$M$$18_29$$mestrado$$Campinas$$SP$$2',
].join('\n') + '\n';

let service: ChildProcess;
let api: GameApi;

function waitFor<T>(probe: () => T | null | undefined | false,
                    what: string, timeoutMs = 10000): Promise<T> {
  const start = Date.now();
  return new Promise((resolve, reject) => {
    const tick = () => {
      let result: T | null | undefined | false;
      try {
        result = probe();
      } catch {
        result = undefined;
      }
      if (result) return resolve(result);
      if (Date.now() - start > timeoutMs) {
        return reject(new Error(`timed out waiting for ${what}`));
      }
      setTimeout(tick, 25);
    };
    tick();
  });
}

before(async () => {
  const dir = mkdtempSync(join(tmpdir(), 'game-ui-'));
  writeFileSync(join(dir, 'corpus.txt'), CORPUS, 'utf-8');
  service = spawn('python3', [
    '-m', 'sensenet.cli', 'serve',
    '--corpus', join(dir, 'corpus.txt'), '--netdir', join(dir, 'nets'),
    '--mgmt-port', '0', '--game-port', '0',
    '--rules', 'en', '--lexicon', 'en', '--negation', 'en',
  ], { stdio: ['ignore', 'pipe', 'inherit'] });

  const port = await new Promise<number>((resolve, reject) => {
    let buffer = '';
    service.stdout!.on('data', (chunk: Buffer) => {
      buffer += chunk.toString('utf-8');
      const match = buffer.match(/game service on port (\d+)/);
      if (match) resolve(Number(match[1]));
    });
    service.on('exit', (code) =>
      reject(new Error(`service exited early with ${code}`)));
    setTimeout(() => reject(new Error('service did not report its port')),
               15000);
  });

  api = new GameApi(`http://127.0.0.1:${port}`);

  const dom = new JSDOM('<main><div id="editor"></div><div id="player"></div></main>',
                        { url: 'http://localhost/' });
  const globals = globalThis as Record<string, unknown>;
  globals.window = dom.window;
  globals.document = dom.window.document;
  globals.HTMLElement = dom.window.HTMLElement;
  globals.Event = dom.window.Event;
});

after(() => {
  service?.kill();
});

function queryText(root: HTMLElement, selector: string): string {
  const node = root.querySelector(selector);
  assert.ok(node, `expected ${selector} in DOM`);
  return (node as HTMLElement).textContent ?? '';
}

function setInput(root: HTMLElement, selector: string, value: string): void {
  const input = root.querySelector(selector) as HTMLInputElement | null;
  assert.ok(input, `expected input ${selector}`);
  input!.value = value;
}

function click(root: HTMLElement, selector: string, nth = 0): void {
  const buttons = root.querySelectorAll(selector);
  assert.ok(buttons.length > nth, `expected button ${selector}[${nth}]`);
  (buttons[nth] as HTMLElement).dispatchEvent(
    new (globalThis as any).Event('click', { bubbles: true }));
}

test('editor publishes and the player plays on real service responses',
     async () => {
  const editorRoot = document.getElementById('editor')!;
  let publishedGameId: string | null = null;
  const { wizard } = await mountEditor(editorRoot, api, EDITOR,
                                       (gameId) => { publishedGameId = gameId; });

  // Step 1: wildcard profile.
  await waitFor(() => editorRoot.querySelector('.step-profile'), 'step 1');
  click(editorRoot, '.submit-step');
  await waitFor(() => editorRoot.querySelector('.step-theme'), 'step 2');

  // Step 2: the theme select offers the six transversal themes.
  assert.equal(editorRoot.querySelectorAll('.theme-select option').length, 6);
  click(editorRoot, '.submit-step');
  await waitFor(() => editorRoot.querySelector('.step-topics'), 'step 3');

  // Step 3: one dice topic.
  setInput(editorRoot, '.topics-input', 'Sexually transmitted diseases');
  click(editorRoot, '.submit-step');
  await waitFor(() => editorRoot.querySelector('.step-cards'), 'step 4');

  // Step 4: secret word with a synonym.
  setInput(editorRoot, '.secret-input', 'aids');
  setInput(editorRoot, '.synonyms-input', 'sida');
  click(editorRoot, '.submit-step');
  await waitFor(() => editorRoot.querySelector('.step-clues'), 'step 5');

  // Step 5: knowledge-base suggestions arrive from the service.
  click(editorRoot, '.load-suggestions');
  await waitFor(() => editorRoot.querySelector('.suggestion'), 'suggestions');
  const sentences = [...editorRoot.querySelectorAll('.suggestion-sentence')]
    .map((node) => node.textContent ?? '');
  assert.ok(sentences.some((s) => s.includes('sexually transmitted disease')),
            `live suggestion expected, got ${JSON.stringify(sentences)}`);
  for (const sentence of sentences) {
    assert.ok(api.traces(sentence), `displayed suggestion not in log: ${sentence}`);
  }

  // Accepting a suggestion puts it straight into the card's clue list.
  click(editorRoot, '.suggestion-accept');
  const accepted = await waitFor(
    () => editorRoot.querySelector('.clue-suggested'), 'accepted clue listed');
  assert.ok(sentences.includes(accepted.textContent ?? ''));

  // Verbatim it would reveal the secret word, so edit it game-suitable.
  click(editorRoot, '.suggestion-edit');
  await waitFor(() => editorRoot.querySelector('.suggestion-edit-input'),
                'inline edit field');
  const editField = editorRoot.querySelector('.suggestion-edit-input') as
    HTMLInputElement;
  editField.value = (accepted.textContent ?? '').replace(/Aids/i, 'It');
  editField.dispatchEvent(new (globalThis as any).Event('change',
                                                        { bubbles: true }));
  await waitFor(() => editorRoot.querySelector('.clue-edited'),
                'edited clue listed');

  setInput(editorRoot, '.author-clue-input', 'You learn about it in health class');
  click(editorRoot, '.author-clue');
  await waitFor(() => editorRoot.querySelector('.clue-authored'),
                'authored clue listed');
  click(editorRoot, '.submit-clues');
  await waitFor(() => editorRoot.querySelector('.step-review'), 'step 6');

  click(editorRoot, '.submit-step');
  await waitFor(() => editorRoot.querySelector('.publish-button'), 'step 7');
  click(editorRoot, '.publish-button');
  await waitFor(() => editorRoot.querySelector('.published-banner'),
                'published banner');
  assert.equal(wizard.published, true);
  assert.ok(publishedGameId, 'publish callback fired');

  // Player module against the published game.
  const playerRoot = document.getElementById('player')!;
  const { player } = await mountPlayer(playerRoot, api, publishedGameId!,
                                       PLAYER);
  await waitFor(() => playerRoot.querySelector('.dice'), 'dice');
  click(playerRoot, '.dice');
  const topic = await waitFor(() => {
    const node = playerRoot.querySelector('.current-topic');
    return node?.textContent || false;
  }, 'rolled topic');
  assert.equal(topic, 'Sexually transmitted diseases');
  assert.ok(api.traces(topic), 'displayed topic not in any logged response');

  // Guessing is disabled until a clue is revealed.
  const guessInput = playerRoot.querySelector('.guess-input') as HTMLInputElement;
  assert.equal(guessInput.disabled, true);

  // Reveal clue 1 into the speech balloon.
  assert.equal(playerRoot.querySelectorAll('.clue-number').length, 2);
  click(playerRoot, '.clue-number');
  const balloon = await waitFor(() => {
    const text = queryText(playerRoot, '.balloon');
    return text.length > 0 ? text : false;
  }, 'balloon text');
  assert.ok(api.traces(balloon), 'displayed clue not in any logged response');

  // An open guess shows the neutral banner, never incorrect styling.
  setInput(playerRoot, '.guess-input', 'hiv');
  click(playerRoot, '.guess-submit');
  const openBanner = await waitFor(
    () => playerRoot.querySelector('.outcome-open'), 'open banner');
  assert.equal(openBanner.textContent, 'keep trying');
  assert.equal(playerRoot.querySelector('.outcome-correct'), null);
  assert.ok(!playerRoot.innerHTML.toLowerCase().includes('incorrect'),
            'open guesses must not be labeled incorrect');
  assert.ok(!playerRoot.innerHTML.toLowerCase().includes('wrong'));

  // The synonym is accepted as the expected answer.
  setInput(playerRoot, '.guess-input', 'sida');
  click(playerRoot, '.guess-submit');
  const correctBanner = await waitFor(
    () => playerRoot.querySelector('.outcome-correct'), 'correct banner');
  assert.equal(correctBanner.textContent, 'correct');
  assert.ok(api.traces('correct'), 'outcome not in any logged response');
  assert.equal(player.session.solved, true);

  // Everything currently displayed traces back to service state.
  for (const guess of player.session.guesses) {
    assert.match(guess.outcome, /^(correct|open)$/);
  }
});

test('wizard drafts are resumable from the service', async () => {
  const { Wizard } = await import('../src/wizard');
  const fresh = await Wizard.create(api, EDITOR);
  await fresh.submitProfile([[], [], [], [], []]);
  await fresh.submitTheme('healthcare');
  const resumed = await Wizard.resume(api, fresh.game.game_id);
  assert.equal(resumed.currentStep, 3);
  assert.equal(resumed.game.theme, 'healthcare');
});
