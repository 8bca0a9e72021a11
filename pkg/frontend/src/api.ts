// Thin typed client for the session service; every semantic answer comes
// from the server, the client never classifies anything itself.

import type { EvaluationWire, SceneWire, ThresholdDelta, TreeNodeWire } from './types.js';

export interface LayoutEdit {
    relocate?: { plot_id: number; origin: [number, number] };
    flip?: { plot_id: number; axis: 'h' | 'v' };
    swap?: number;
    condense?: [number, number][];
    toggle_condense?: [number, number];
    uncondense?: boolean;
    jitter?: number;
    trace_mode?: 'terminate' | 'full';
    context?: boolean;
    summary?: 'none' | 'centers' | 'minmax';
    case_selection?: number[] | null;
}

async function expectOk(response: Response): Promise<any> {
    if (!response.ok) {
        let detail = `${response.status}`;
        try {
            const body = await response.json();
            if (body.detail) detail = `${body.detail}`;
        } catch {
            /* keep the status code */
        }
        throw new Error(detail);
    }
    return response.json();
}

export class SessionClient {
    constructor(
        readonly base: string,
        readonly sessionId: string,
        private fetchImpl: typeof fetch = fetch,
    ) {}

    static async create(
        base: string,
        body: Record<string, unknown>,
        fetchImpl: typeof fetch = fetch,
    ): Promise<SessionClient> {
        const r = await fetchImpl(`${base}/sessions`, {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify(body),
        });
        const data = await expectOk(r);
        return new SessionClient(base, data.session_id, fetchImpl);
    }

    private url(suffix: string): string {
        return `${this.base}/sessions/${this.sessionId}${suffix}`;
    }

    async scene(): Promise<SceneWire> {
        return expectOk(await this.fetchImpl(this.url('/scene')));
    }

    async evaluation(): Promise<EvaluationWire> {
        return expectOk(await this.fetchImpl(this.url('/evaluation')));
    }

    async tree(): Promise<TreeNodeWire> {
        return expectOk(await this.fetchImpl(this.url('/tree')));
    }

    async patchThreshold(nodeId: number, value: number): Promise<{ scene: SceneWire; delta: ThresholdDelta }> {
        const r = await this.fetchImpl(this.url('/threshold'), {
            method: 'PATCH',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify({ node_id: nodeId, value }),
        });
        return expectOk(r);
    }

    async patchLayout(edit: LayoutEdit): Promise<SceneWire> {
        const r = await this.fetchImpl(this.url('/layout'), {
            method: 'PATCH',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify(edit),
        });
        return expectOk(r);
    }

    async undo(): Promise<SceneWire> {
        const r = await this.fetchImpl(this.url('/undo'), { method: 'POST' });
        return expectOk(r);
    }

    async report(kind: 'overgen' | 'margins' | 'split-compare'): Promise<any> {
        return expectOk(await this.fetchImpl(this.url(`/reports/${kind}`)));
    }
}
