// Wires user gestures to service calls and re-renders.  The client owns no
// classification logic: every gesture becomes a PATCH and the response scene
// replaces the display wholesale.

import { SessionClient } from './api.js';
import { EditQueue, axisValues, initialViewState, snapCandidates, snapTo, ViewState } from './state.js';
import type { PolylineWire, SceneWire, TreeNodeWire } from './types.js';
import { Geometry, plotRanges, renderEvaluation, renderScene } from './view.js';

export interface AppOptions {
    width?: number;
    height?: number;
    documentOverride?: Document;
}

interface ThresholdDrag {
    kind: 'threshold';
    plotId: number;
    axis: 'h' | 'v';
    attr: string;
    startValue: number;
    nodeIds: number[];
    currentValue: number;
    free: boolean;
    ghost: SVGElement;
}

interface PlotDrag {
    kind: 'plot';
    plotId: number;
    startPx: [number, number];
    origin: [number, number];
    currentOrigin: [number, number];
}

export class App {
    readonly state: ViewState = initialViewState();
    readonly queue = new EditQueue();
    readonly root: HTMLElement;
    private doc: Document;
    private geometry!: Geometry;
    private drag: ThresholdDrag | PlotDrag | null = null;
    private splitIndex = new Map<string, number[]>();  // "attr@t" -> node ids
    private width: number;
    private height: number;

    constructor(
        readonly client: SessionClient,
        container: HTMLElement,
        options: AppOptions = {},
    ) {
        this.root = container;
        this.doc = options.documentOverride ?? container.ownerDocument;
        this.width = options.width ?? 1280;
        this.height = options.height ?? 720;
        this.queue.onError = (err) => this.showBanner(`edit failed: ${err.message}`, true);
    }

    async start(): Promise<void> {
        const [scene, tree] = await Promise.all([this.client.scene(), this.client.tree()]);
        this.indexTree(tree);
        this.setScene(scene);
        this.doc.addEventListener('mousemove', (ev) => this.onMouseMove(ev as MouseEvent));
        this.doc.addEventListener('mouseup', (ev) => this.onMouseUp(ev as MouseEvent));
    }

    private indexTree(node: TreeNodeWire): void {
        this.splitIndex.clear();
        const walk = (n: TreeNodeWire): void => {
            if (n.kind === 'split') {
                const key = `${n.attribute}@${n.threshold}`;
                const ids = this.splitIndex.get(key) ?? [];
                ids.push(n.node_id);
                this.splitIndex.set(key, ids);
                if (n.low) walk(n.low);
                if (n.high) walk(n.high);
            }
        };
        walk(node);
    }

    setScene(scene: SceneWire): void {
        this.state.scene = scene;
        this.render();
    }

    get scene(): SceneWire {
        if (!this.state.scene) throw new Error('no scene yet');
        return this.state.scene;
    }

    render(): void {
        const scene = this.scene;
        this.geometry = new Geometry(scene, this.width, this.height);
        while (this.root.firstChild) this.root.removeChild(this.root.firstChild);

        const svg = renderScene(this.doc, scene, this.geometry, {
            onRegionClick: (plotId, regionIndex) => this.toggleCondense(plotId, regionIndex),
            onThresholdDragStart: (plotId, axis, value, ev) => this.beginThresholdDrag(plotId, axis, value, ev),
            onPlotDragStart: (plotId, ev) => this.beginPlotDrag(plotId, ev),
            onCaseHover: (line, ev) => this.showTooltip(line, ev),
        });
        this.root.appendChild(svg as unknown as Node);

        const controls = this.doc.createElement('div');
        controls.setAttribute('data-role', 'controls');
        for (const plot of scene.plots) {
            for (const [label, action] of [
                ['flip-h', () => this.queueLayout(`flip-h-${plot.plot_id}`, { flip: { plot_id: plot.plot_id, axis: 'h' } })],
                ['flip-v', () => this.queueLayout(`flip-v-${plot.plot_id}`, { flip: { plot_id: plot.plot_id, axis: 'v' } })],
                ['swap', () => this.queueLayout(`swap-${plot.plot_id}`, { swap: plot.plot_id })],
            ] as const) {
                const btn = this.doc.createElement('button');
                btn.textContent = `${label} ${plot.plot_id}`;
                btn.setAttribute('data-role', `${label}`);
                btn.setAttribute('data-plot', String(plot.plot_id));
                btn.addEventListener('click', action);
                controls.appendChild(btn);
            }
        }
        const undoBtn = this.doc.createElement('button');
        undoBtn.textContent = 'undo';
        undoBtn.setAttribute('data-role', 'undo');
        undoBtn.addEventListener('click', () =>
            this.queue.submit('undo', async () => this.setScene(await this.client.undo())));
        controls.appendChild(undoBtn);
        this.root.appendChild(controls);

        this.root.appendChild(renderEvaluation(this.doc, scene.evaluation));

        const banner = this.doc.createElement('div');
        banner.setAttribute('data-role', 'banner');
        this.root.appendChild(banner);
        const tooltip = this.doc.createElement('div');
        tooltip.setAttribute('data-role', 'tooltip');
        tooltip.style.display = 'none';
        this.root.appendChild(tooltip);
    }

    // --- condensation toggle -------------------------------------------------

    private toggleCondense(plotId: number, regionIndex: number): void {
        const region = this.scene.plots.find((p) => p.plot_id === plotId)?.regions[regionIndex];
        if (!region) return;
        this.queueLayout(`condense-${plotId}-${regionIndex}`, {
            toggle_condense: [plotId, regionIndex],
        });
    }

    private queueLayout(kind: string, edit: Parameters<SessionClient['patchLayout']>[0]): void {
        this.queue.submit(kind, async () => {
            this.state.pendingEdit = kind;
            const scene = await this.client.patchLayout(edit);
            this.state.pendingEdit = null;
            this.setScene(scene);
        });
    }

    // --- threshold dragging ----------------------------------------------------

    beginThresholdDrag(plotId: number, axis: 'h' | 'v', value: number, ev: MouseEvent): void {
        const plot = this.scene.plots.find((p) => p.plot_id === plotId);
        if (!plot) return;
        const attr = axis === 'h' ? plot.axes.h.attr : plot.axes.v.attr;
        const nodeIds = this.splitIndex.get(`${attr}@${value}`) ?? [];
        if (!nodeIds.length) return;
        const ghost = this.doc.createElementNS('http://www.w3.org/2000/svg', 'line') as SVGElement;
        ghost.setAttribute('data-role', 'ghost-threshold');
        ghost.setAttribute('stroke', '#ff9800');
        ghost.setAttribute('stroke-width', '2');
        this.root.querySelector('[data-role="scene"]')?.appendChild(ghost as unknown as Node);
        this.drag = {
            kind: 'threshold', plotId, axis, attr,
            startValue: value, nodeIds, currentValue: value,
            free: ev.ctrlKey || ev.metaKey, ghost,
        };
        ev.preventDefault?.();
    }

    beginPlotDrag(plotId: number, ev: MouseEvent): void {
        const plot = this.scene.plots.find((p) => p.plot_id === plotId);
        if (!plot) return;
        this.drag = {
            kind: 'plot', plotId,
            startPx: [ev.clientX, ev.clientY],
            origin: [plot.origin[0], plot.origin[1]],
            currentOrigin: [plot.origin[0], plot.origin[1]],
        };
        ev.preventDefault?.();
    }

    private onMouseMove(ev: MouseEvent): void {
        if (!this.drag) return;
        if (this.drag.kind === 'threshold') {
            const plot = this.scene.plots.find((p) => p.plot_id === this.drag!.plotId)!;
            const [hv, vv] = this.geometry.valueAt(plot, ev.clientX, ev.clientY);
            let value = this.drag.axis === 'h' ? hv : vv;
            if (!this.drag.free) {
                value = snapTo(value, snapCandidates(axisValues(this.scene, plot.plot_id, this.drag.axis)));
            }
            this.drag.currentValue = value;
            this.updateGhost(plot, value);
        } else {
            const dx = (ev.clientX - this.drag.startPx[0]) / this.geometry.scale;
            const dy = -(ev.clientY - this.drag.startPx[1]) / this.geometry.scale;
            this.drag.currentOrigin = [this.drag.origin[0] + dx, this.drag.origin[1] + dy];
        }
    }

    private updateGhost(plot: SceneWire['plots'][number], value: number): void {
        if (!this.drag || this.drag.kind !== 'threshold') return;
        const g = this.geometry;
        const ranges = plotRanges(plot);
        const [a, b] = this.drag.axis === 'h'
            ? [g.sceneOf(plot, value, ranges.v[0]), g.sceneOf(plot, value, ranges.v[1])]
            : [g.sceneOf(plot, ranges.h[0], value), g.sceneOf(plot, ranges.h[1], value)];
        const [x1, y1] = g.toPx(a[0], a[1]);
        const [x2, y2] = g.toPx(b[0], b[1]);
        this.drag.ghost.setAttribute('x1', String(x1));
        this.drag.ghost.setAttribute('y1', String(y1));
        this.drag.ghost.setAttribute('x2', String(x2));
        this.drag.ghost.setAttribute('y2', String(y2));
    }

    private onMouseUp(_ev: MouseEvent): void {
        const drag = this.drag;
        this.drag = null;
        if (!drag) return;
        if (drag.kind === 'threshold') {
            drag.ghost.parentNode?.removeChild(drag.ghost as unknown as Node);
            if (drag.currentValue === drag.startValue) return;
            const nodeId = drag.nodeIds[0];
            this.queue.submit('threshold', async () => {
                this.state.pendingEdit = 'threshold';
                const { scene, delta } = await this.client.patchThreshold(nodeId, drag.currentValue);
                this.state.pendingEdit = null;
                this.setScene(scene);
                this.showBanner(
                    `${delta.changed_cases.length} cases changed` +
                    ` (error ${delta.error_rate_before.toFixed(4)} -> ${delta.error_rate_after.toFixed(4)})`,
                );
            });
        } else {
            const [ox, oy] = drag.currentOrigin;
            if (ox === drag.origin[0] && oy === drag.origin[1]) return;
            this.queueLayout(`relocate-${drag.plotId}`, {
                relocate: { plot_id: drag.plotId, origin: [ox, oy] },
            });
        }
    }

    // --- feedback -------------------------------------------------------------

    showBanner(text: string, isError = false): void {
        const banner = this.root.querySelector('[data-role="banner"]') as HTMLElement | null;
        if (!banner) return;
        banner.textContent = text;
        banner.setAttribute('data-error', isError ? '1' : '0');
    }

    private showTooltip(line: PolylineWire | null, ev: MouseEvent): void {
        const tip = this.root.querySelector('[data-role="tooltip"]') as HTMLElement | null;
        if (!tip) return;
        if (!line) {
            tip.style.display = 'none';
            this.state.hoveredCase = null;
            return;
        }
        this.state.hoveredCase = line.case_id;
        const scene = this.scene;
        const path = line.vertices.map((v) => {
            const plot = scene.plots.find((p) => p.plot_id === v.plot)!;
            return `${plot.axes.h.attr}=${v.raw[0] ?? '?'}, ${plot.axes.v.attr}=${v.raw[1] ?? '?'}`;
        });
        tip.textContent =
            `case ${line.case_id}: actual ${line.actual}, predicted ${line.predicted}` +
            (line.misclassified ? ' (misclassified)' : '') + ` | ` + path.join(' -> ');
        tip.style.display = 'block';
        tip.style.left = `${ev.clientX + 8}px`;
        tip.style.top = `${ev.clientY + 8}px`;
    }
}
