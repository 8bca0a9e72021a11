import { describe, expect, it } from 'vitest';

import { EditQueue, axisValues, snapCandidates, snapTo } from '../src/state.js';
import type { SceneWire } from '../src/types.js';

describe('EditQueue', () => {
    it('runs a job immediately when idle', async () => {
        const q = new EditQueue();
        let ran = 0;
        q.submit('a', async () => { ran += 1; });
        await q.settled();
        expect(ran).toBe(1);
    });

    it('coalesces gestures of the same kind while busy', async () => {
        const q = new EditQueue();
        const log: string[] = [];
        let release: () => void = () => undefined;
        q.submit('slow', () => new Promise<void>((resolve) => {
            release = () => { log.push('slow'); resolve(); };
        }));
        q.submit('drag', async () => { log.push('drag-1'); });
        q.submit('drag', async () => { log.push('drag-2'); });
        q.submit('drag', async () => { log.push('drag-3'); });
        expect(q.inFlight).toBe(true);
        release();
        await q.settled();
        // only the newest drag survived the coalescing
        expect(log).toEqual(['slow', 'drag-3']);
    });

    it('keeps distinct kinds', async () => {
        const q = new EditQueue();
        const log: string[] = [];
        let release: () => void = () => undefined;
        q.submit('slow', () => new Promise<void>((resolve) => {
            release = () => resolve();
        }));
        q.submit('a', async () => { log.push('a'); });
        q.submit('b', async () => { log.push('b'); });
        release();
        await q.settled();
        expect(log.sort()).toEqual(['a', 'b']);
    });

    it('reports errors without wedging the queue', async () => {
        const q = new EditQueue();
        const errors: string[] = [];
        q.onError = (e) => errors.push(e.message);
        q.submit('bad', async () => { throw new Error('boom'); });
        await q.settled();
        let ran = false;
        q.submit('good', async () => { ran = true; });
        await q.settled();
        expect(errors).toEqual(['boom']);
        expect(ran).toBe(true);
    });
});

describe('snapping', () => {
    it('computes midpoints of distinct values', () => {
        expect(snapCandidates([1, 2, 2, 3])).toEqual([1.5, 2.5]);
        expect(snapCandidates([5])).toEqual([]);
    });

    it('snaps to the nearest candidate', () => {
        expect(snapTo(2.4, [1.5, 2.5])).toBe(2.5);
        expect(snapTo(1.6, [1.5, 2.5])).toBe(1.5);
        expect(snapTo(9, [])).toBe(9);
    });

    it('collects axis values from polylines', () => {
        const scene = {
            polylines: [
                { vertices: [{ plot: 0, raw: [1, 7] }, { plot: 1, raw: [3, 4] }] },
                { vertices: [{ plot: 0, raw: [2, null] }] },
            ],
        } as unknown as SceneWire;
        expect(axisValues(scene, 0, 'h')).toEqual([1, 2]);
        expect(axisValues(scene, 0, 'v')).toEqual([7]);
        expect(axisValues(scene, 1, 'h')).toEqual([3]);
    });
});
