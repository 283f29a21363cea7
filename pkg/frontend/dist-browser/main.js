/** Browser bootstrap: editor on the left, player on the right once a game
 * is published. The service URL comes from ?service=; profiles from simple
 * prompts would be overkill for a demo page, so defaults are provided. */
import { GameApi } from './api';
import { mountEditor, mountPlayer } from './dom';
const DEFAULT_SERVICE = 'http://127.0.0.1:8800';
const DEFAULT_EDITOR = {
    gender: 'F', age_group: '30_45', education: 'doutorado',
    city: 'São Carlos', state: 'SP',
};
const DEFAULT_PLAYER = {
    gender: 'M', age_group: '13_17', education: '2_incompleto',
    city: 'São Carlos', state: 'SP',
};
async function boot() {
    const params = new URLSearchParams(window.location.search);
    const api = new GameApi(params.get('service') ?? DEFAULT_SERVICE);
    const editorRoot = document.getElementById('editor');
    const playerRoot = document.getElementById('player');
    if (!editorRoot || !playerRoot)
        throw new Error('missing mount points');
    await mountEditor(editorRoot, api, DEFAULT_EDITOR, (gameId) => {
        void mountPlayer(playerRoot, api, gameId, DEFAULT_PLAYER);
    });
}
void boot();
