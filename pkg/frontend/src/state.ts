// View state and the single-in-flight edit queue.  Gestures arriving while
// an edit is on the wire are coalesced per kind: only the newest of each
// kind runs when the wire frees up.

import type { SceneWire } from './types.js';

export interface ViewState {
    scene: SceneWire | null;
    pendingEdit: string | null;
    hoveredCase: number | null;
    pinnedCases: number[];
    panels: { evaluation: boolean; reports: boolean };
}

export function initialViewState(): ViewState {
    return {
        scene: null,
        pendingEdit: null,
        hoveredCase: null,
        pinnedCases: [],
        panels: { evaluation: true, reports: false },
    };
}

type Job = () => Promise<void>;

export class EditQueue {
    private busy = false;
    private pending = new Map<string, Job>();
    onError: (err: Error) => void = () => undefined;
    onIdle: () => void = () => undefined;

    /** Run a job now, or coalesce it behind the in-flight one. */
    submit(kind: string, job: Job): void {
        if (this.busy) {
            this.pending.set(kind, job);  // newest gesture of a kind wins
            return;
        }
        this.busy = true;
        void this.run(job);
    }

    get inFlight(): boolean {
        return this.busy;
    }

    private async run(job: Job): Promise<void> {
        try {
            await job();
        } catch (err) {
            this.onError(err instanceof Error ? err : new Error(String(err)));
        }
        const next = this.pending.entries().next();
        if (!next.done) {
            const [kind, nextJob] = next.value;
            this.pending.delete(kind);
            void this.run(nextJob);
            return;
        }
        this.busy = false;
        this.onIdle();
    }

    /** Resolves once every queued edit has drained. */
    async settled(): Promise<void> {
        while (this.busy) {
            await new Promise((resolve) => setTimeout(resolve, 5));
        }
    }
}

/** Midpoints between consecutive distinct values: the snap guide for
 * threshold dragging, computed from the values visible in the scene. */
export function snapCandidates(values: number[]): number[] {
    const distinct = [...new Set(values)].sort((a, b) => a - b);
    const mids: number[] = [];
    for (let i = 0; i + 1 < distinct.length; i++) {
        mids.push((distinct[i] + distinct[i + 1]) / 2);
    }
    return mids;
}

export function snapTo(value: number, candidates: number[]): number {
    if (!candidates.length) return value;
    let best = candidates[0];
    for (const c of candidates) {
        if (Math.abs(c - value) < Math.abs(best - value)) best = c;
    }
    return best;
}

/** Values of one plot axis across every polyline, from the raw pairs. */
export function axisValues(scene: SceneWire, plotId: number, axis: 'h' | 'v'): number[] {
    const out: number[] = [];
    for (const line of scene.polylines) {
        for (const v of line.vertices) {
            if (v.plot === plotId) {
                const raw = axis === 'h' ? v.raw[0] : v.raw[1];
                if (raw !== null) out.push(raw);
            }
        }
    }
    return out;
}
