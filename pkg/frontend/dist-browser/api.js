/** Typed client for the game service's JSON endpoints.
 *
 * Every request/response pair is appended to `log`, so tests can assert
 * that everything the UI displays traces back to a service response.
 */
export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
const RETRYABLE_ATTEMPTS = 2;
export class GameApi {
    constructor(baseUrl) {
        this.baseUrl = baseUrl;
        this.log = [];
    }
    async call(method, path, body, idempotent = false) {
        let lastError;
        const attempts = idempotent ? RETRYABLE_ATTEMPTS : 1;
        for (let attempt = 0; attempt < attempts; attempt++) {
            let response;
            try {
                response = await fetch(this.baseUrl + path, {
                    method,
                    headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
                    body: body === undefined ? undefined : JSON.stringify(body),
                });
            }
            catch (err) {
                lastError = err; // network failure: retry idempotent calls
                continue;
            }
            const payload = (await response.json());
            this.log.push({ method, path, status: response.status, response: payload });
            if (!response.ok) {
                throw new ApiError(response.status, payload.error ?? 'request failed');
            }
            return payload;
        }
        throw lastError instanceof Error ? lastError : new Error(String(lastError));
    }
    createGame(editorProfile) {
        return this.call('POST', '/games', { editor_profile: editorProfile });
    }
    getGame(gameId) {
        return this.call('GET', `/games/${gameId}`, undefined, true);
    }
    wizardStep(gameId, step, payload) {
        return this.call('POST', `/games/${gameId}/wizard/${step}`, payload);
    }
    suggestions(gameId, secret, synonyms) {
        const params = new URLSearchParams({ secret });
        if (synonyms.length)
            params.set('synonyms', synonyms.join(','));
        return this.call('GET', `/games/${gameId}/suggestions?${params}`, undefined, true);
    }
    createSession(gameId, playerProfile) {
        return this.call('POST', '/sessions', { game_id: gameId, player_profile: playerProfile });
    }
    getSession(sessionId) {
        return this.call('GET', `/sessions/${sessionId}`, undefined, true);
    }
    roll(sessionId) {
        return this.call('POST', `/sessions/${sessionId}/roll`, {});
    }
    reveal(sessionId, index) {
        return this.call('POST', `/sessions/${sessionId}/reveal`, { index });
    }
    guess(sessionId, text) {
        return this.call('POST', `/sessions/${sessionId}/guess`, { guess: text });
    }
    /** True when a displayed string occurs somewhere in a logged response. */
    traces(displayed) {
        return this.log.some((entry) => JSON.stringify(entry.response).includes(JSON.stringify(displayed).slice(1, -1)));
    }
}
