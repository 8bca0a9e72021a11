// Scene JSON -> SVG DOM. Pure rendering: geometry and semantics are all in
// the wire data, the client just draws rectangles, lines and polylines.

import type { PlotWire, PolylineWire, RegionWire, SceneWire } from './types.js';

export const CLASS_COLORS = ['#2e7d32', '#c62828', '#1565c0', '#ef6c00', '#6a1b9a', '#00838f'];
const GRAY_LO = 0.35;
const GRAY_HI = 0.75;
const SVG_NS = 'http://www.w3.org/2000/svg';

export function classColor(cls: string, classes: string[]): string {
    const i = classes.indexOf(cls);
    return CLASS_COLORS[(i < 0 ? classes.length : i) % CLASS_COLORS.length];
}

export function grayShade(shadeKey: number, nShades: number): string {
    const luma = nShades <= 1
        ? (GRAY_LO + GRAY_HI) / 2
        : GRAY_HI - ((GRAY_HI - GRAY_LO) * shadeKey) / (nShades - 1);
    const c = Math.round(luma * 255);
    const h = c.toString(16).padStart(2, '0');
    return `#${h}${h}${h}`;
}

export function mixWithWhite(color: string, intensity: number): string {
    const ch = (o: number) => parseInt(color.slice(o, o + 2), 16) / 255;
    const mix = (c: number) => Math.round((c * intensity + (1 - intensity)) * 255);
    const hex = (v: number) => v.toString(16).padStart(2, '0');
    return `#${hex(mix(ch(1)))}${hex(mix(ch(3)))}${hex(mix(ch(5)))}`;
}

/** Full value ranges of a plot, recovered from its region tiling. */
export function plotRanges(plot: PlotWire): { h: [number, number]; v: [number, number] } {
    let hLo = Infinity, hHi = -Infinity, vLo = Infinity, vHi = -Infinity;
    for (const r of plot.regions) {
        hLo = Math.min(hLo, r.h_interval[0]);
        hHi = Math.max(hHi, r.h_interval[1]);
        vLo = Math.min(vLo, r.v_interval[0]);
        vHi = Math.max(vHi, r.v_interval[1]);
    }
    if (!isFinite(hLo)) return { h: [0, 1], v: [0, 1] };
    return { h: [hLo, hHi], v: [vLo, vHi] };
}

export class Geometry {
    readonly scale: number;
    readonly minX: number;
    readonly minY: number;

    constructor(
        readonly scene: SceneWire,
        readonly width: number,
        readonly height: number,
        readonly margin = 40,
    ) {
        const xs: number[] = [];
        const ys: number[] = [];
        for (const p of scene.plots) {
            xs.push(p.origin[0], p.origin[0] + p.size[0]);
            ys.push(p.origin[1], p.origin[1] + p.size[1]);
        }
        this.minX = xs.length ? Math.min(...xs) : 0;
        this.minY = ys.length ? Math.min(...ys) : 0;
        const spanX = Math.max((xs.length ? Math.max(...xs) : 1) - this.minX, 1e-9);
        const spanY = Math.max((ys.length ? Math.max(...ys) : 1) - this.minY, 1e-9);
        this.scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
    }

    toPx(x: number, y: number): [number, number] {
        return [
            this.margin + (x - this.minX) * this.scale,
            this.height - this.margin - (y - this.minY) * this.scale,
        ];
    }

    /** Scene coordinates for a pixel position (inverse of toPx). */
    toScene(px: number, py: number): [number, number] {
        return [
            (px - this.margin) / this.scale + this.minX,
            (this.height - this.margin - py) / this.scale + this.minY,
        ];
    }

    /** Local unit coordinates of a data pair inside a plot (flip/swap applied). */
    localOf(plot: PlotWire, hValue: number, vValue: number): [number, number] {
        const { h, v } = plotRanges(plot);
        let u = (hValue - h[0]) / (h[1] - h[0]);
        let w = (vValue - v[0]) / (v[1] - v[0]);
        if (plot.axes.h.flipped) u = 1 - u;
        if (plot.axes.v.flipped) w = 1 - w;
        if (plot.swapped) [u, w] = [w, u];
        return [u, w];
    }

    sceneOf(plot: PlotWire, hValue: number, vValue: number): [number, number] {
        const [u, w] = this.localOf(plot, hValue, vValue);
        return [plot.origin[0] + u * plot.size[0], plot.origin[1] + w * plot.size[1]];
    }

    /** Map a pixel inside a plot back to the (h, v) data values. */
    valueAt(plot: PlotWire, px: number, py: number): [number, number] {
        const [sx, sy] = this.toScene(px, py);
        let u = (sx - plot.origin[0]) / plot.size[0];
        let w = (sy - plot.origin[1]) / plot.size[1];
        if (plot.swapped) [u, w] = [w, u];
        if (plot.axes.h.flipped) u = 1 - u;
        if (plot.axes.v.flipped) w = 1 - w;
        const { h, v } = plotRanges(plot);
        return [h[0] + u * (h[1] - h[0]), v[0] + w * (v[1] - v[0])];
    }
}

function el(doc: Document, name: string, attrs: Record<string, string | number>): SVGElement {
    const node = doc.createElementNS(SVG_NS, name) as SVGElement;
    for (const [k, value] of Object.entries(attrs)) node.setAttribute(k, String(value));
    return node;
}

function regionFill(region: RegionWire, plot: PlotWire, classes: string[]): string {
    if (region.kind === 'decided') {
        return mixWithWhite(classColor(region.class ?? '', classes), region.intensity);
    }
    const nShades = plot.regions.filter((r) => r.kind === 'undecided').length;
    return grayShade(region.shade_key ?? 0, nShades);
}

export interface RenderHooks {
    onRegionClick?: (plotId: number, regionIndex: number) => void;
    onThresholdDragStart?: (plotId: number, axis: 'h' | 'v', value: number, ev: MouseEvent) => void;
    onPlotDragStart?: (plotId: number, ev: MouseEvent) => void;
    onCaseHover?: (line: PolylineWire | null, ev: MouseEvent) => void;
}

/** Render the scene into a fresh <svg> element. */
export function renderScene(
    doc: Document,
    scene: SceneWire,
    geometry: Geometry,
    hooks: RenderHooks = {},
): SVGElement {
    const svg = el(doc, 'svg', {
        width: geometry.width,
        height: geometry.height,
        viewBox: `0 0 ${geometry.width} ${geometry.height}`,
    });
    svg.setAttribute('data-role', 'scene');
    const classes = scene.evaluation.classes;

    for (const plot of [...scene.plots].sort((a, b) => a.plot_id - b.plot_id)) {
        const group = el(doc, 'g', {});
        group.setAttribute('data-plot', String(plot.plot_id));
        const [x0, y0] = geometry.toPx(plot.origin[0], plot.origin[1] + plot.size[1]);
        const [x1, y1] = geometry.toPx(plot.origin[0] + plot.size[0], plot.origin[1]);
        const frame = el(doc, 'rect', {
            x: x0, y: y0, width: x1 - x0, height: y1 - y0,
            fill: '#fafafa', stroke: '#444', 'stroke-width': 1,
        });
        frame.setAttribute('data-role', 'plot-frame');
        frame.addEventListener('mousedown', (ev) => hooks.onPlotDragStart?.(plot.plot_id, ev as MouseEvent));
        group.appendChild(frame);

        plot.regions.forEach((region, index) => {
            const [ax, ay] = geometry.sceneOf(plot, region.h_interval[0], region.v_interval[0]);
            const [bx, by] = geometry.sceneOf(plot, region.h_interval[1], region.v_interval[1]);
            const [pax, pay] = geometry.toPx(Math.min(ax, bx), Math.min(ay, by));
            const [pbx, pby] = geometry.toPx(Math.max(ax, bx), Math.max(ay, by));
            const rect = el(doc, 'rect', {
                x: pax, y: pby, width: pbx - pax, height: pay - pby,
                fill: regionFill(region, plot, classes),
                stroke: '#666', 'stroke-width': 0.5,
            });
            rect.setAttribute('data-role', 'region');
            rect.setAttribute('data-plot', String(plot.plot_id));
            rect.setAttribute('data-region', String(index));
            rect.setAttribute('data-kind', region.kind);
            if (region.condensed) rect.setAttribute('data-condensed', '1');
            rect.addEventListener('click', () => hooks.onRegionClick?.(plot.plot_id, index));
            group.appendChild(rect);
        });

        // draggable threshold lines, one per axis threshold
        const ranges = plotRanges(plot);
        for (const t of plot.axes.h.thresholds) {
            const [sx0, sy0] = geometry.sceneOf(plot, t, ranges.v[0]);
            const [sx1, sy1] = geometry.sceneOf(plot, t, ranges.v[1]);
            const [lx0, ly0] = geometry.toPx(sx0, sy0);
            const [lx1, ly1] = geometry.toPx(sx1, sy1);
            const line = el(doc, 'line', {
                x1: lx0, y1: ly0, x2: lx1, y2: ly1,
                stroke: '#111', 'stroke-width': 2, 'stroke-dasharray': '5,3',
            });
            line.setAttribute('data-role', 'threshold');
            line.setAttribute('data-plot', String(plot.plot_id));
            line.setAttribute('data-axis', 'h');
            line.setAttribute('data-attr', plot.axes.h.attr);
            line.setAttribute('data-value', String(t));
            line.addEventListener('mousedown', (ev) =>
                hooks.onThresholdDragStart?.(plot.plot_id, 'h', t, ev as MouseEvent));
            group.appendChild(line);
        }
        for (const t of plot.axes.v.thresholds) {
            const [sx0, sy0] = geometry.sceneOf(plot, ranges.h[0], t);
            const [sx1, sy1] = geometry.sceneOf(plot, ranges.h[1], t);
            const [lx0, ly0] = geometry.toPx(sx0, sy0);
            const [lx1, ly1] = geometry.toPx(sx1, sy1);
            const line = el(doc, 'line', {
                x1: lx0, y1: ly0, x2: lx1, y2: ly1,
                stroke: '#111', 'stroke-width': 2, 'stroke-dasharray': '5,3',
            });
            line.setAttribute('data-role', 'threshold');
            line.setAttribute('data-plot', String(plot.plot_id));
            line.setAttribute('data-axis', 'v');
            line.setAttribute('data-attr', plot.axes.v.attr);
            line.setAttribute('data-value', String(t));
            line.addEventListener('mousedown', (ev) =>
                hooks.onThresholdDragStart?.(plot.plot_id, 'v', t, ev as MouseEvent));
            group.appendChild(line);
        }

        const [lx, ly] = geometry.toPx(plot.origin[0], plot.origin[1] + plot.size[1]);
        const label = el(doc, 'text', {
            x: lx + 4, y: ly + 14, 'font-family': 'monospace', 'font-size': 11, fill: '#222',
        });
        label.textContent = `${plot.axes.h.attr} / ${plot.axes.v.attr}${plot.context ? ' (context)' : ''}`;
        group.appendChild(label);
        svg.appendChild(group);
    }

    for (const line of scene.polylines) {
        const color = classColor(line.predicted, classes);
        const opacity = line.dimmed ? 0.25 : line.summary ? 0.9 : 0.6;
        const points = line.vertices
            .map((v) => geometry.toPx(v.x, v.y).map((c) => c.toFixed(2)).join(','))
            .join(' ');
        const poly = el(doc, 'polyline', {
            points, fill: 'none', stroke: color,
            'stroke-width': line.summary ? 2.4 : 1.2, 'stroke-opacity': opacity,
        });
        poly.setAttribute('data-role', 'case');
        poly.setAttribute('data-case', String(line.case_id));
        poly.setAttribute('data-plots', line.vertices.map((v) => v.plot).join(','));
        if (line.misclassified) poly.setAttribute('data-misclassified', '1');
        poly.addEventListener('mouseenter', (ev) => hooks.onCaseHover?.(line, ev as MouseEvent));
        poly.addEventListener('mouseleave', (ev) => hooks.onCaseHover?.(null, ev as MouseEvent));
        svg.appendChild(poly);
        if (line.misclassified && !line.dimmed && line.vertices.length) {
            const last = line.vertices[line.vertices.length - 1];
            const [cx, cy] = geometry.toPx(last.x, last.y);
            svg.appendChild(el(doc, 'circle', {
                cx, cy, r: 5, fill: 'none', stroke: '#ff1744', 'stroke-width': 1.4,
            }));
        }
    }
    return svg;
}

/** The evaluation panel: error rate plus the confusion matrix table. */
export function renderEvaluation(doc: Document, evaluation: SceneWire['evaluation']): HTMLElement {
    const panel = doc.createElement('div');
    panel.setAttribute('data-role', 'evaluation');
    const rate = doc.createElement('div');
    rate.setAttribute('data-role', 'error-rate');
    rate.textContent = `error rate ${evaluation.error_rate.toFixed(4)}`;
    panel.appendChild(rate);
    const table = doc.createElement('table');
    table.setAttribute('data-role', 'confusion');
    const head = doc.createElement('tr');
    head.appendChild(doc.createElement('th'));
    for (const c of evaluation.classes) {
        const th = doc.createElement('th');
        th.textContent = c;
        head.appendChild(th);
    }
    table.appendChild(head);
    evaluation.classes.forEach((actual, i) => {
        const tr = doc.createElement('tr');
        const th = doc.createElement('th');
        th.textContent = actual;
        tr.appendChild(th);
        evaluation.confusion[i].forEach((n) => {
            const td = doc.createElement('td');
            td.textContent = String(n);
            tr.appendChild(td);
        });
        table.appendChild(tr);
    });
    panel.appendChild(table);
    return panel;
}
