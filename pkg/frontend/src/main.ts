// Browser bootstrap: create (or join) a session and mount the app.

import { SessionClient } from './api.js';
import { App } from './interactions.js';

async function boot(): Promise<void> {
    const container = document.getElementById('app');
    if (!container) throw new Error('missing #app container');
    const params = new URLSearchParams(window.location.search);
    const base = params.get('base') ?? '';
    const sessionId = params.get('session');

    let client: SessionClient;
    if (sessionId) {
        client = new SessionClient(base, sessionId);
    } else {
        client = await SessionClient.create(base, {
            dataset_id: params.get('dataset') ?? 'iris',
            induce_params: { min_leaf: Number(params.get('min_leaf') ?? 3) },
        });
    }
    const app = new App(client, container);
    await app.start();
}

boot().catch((err) => {
    const container = document.getElementById('app');
    if (container) container.textContent = `failed to start: ${err}`;
});
