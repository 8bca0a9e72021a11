// Wire types mirroring the service's scene / evaluation / report JSON.

export interface AxisWire {
    attr: string;
    thresholds: number[];
    flipped: boolean;
}

export interface RegionWire {
    h_interval: [number, number];
    v_interval: [number, number];
    kind: 'decided' | 'undecided';
    node_id: number;
    class?: string;
    dest?: number;
    shade_key?: number;
    intensity: number;
    count: number;
    condensed: boolean;
    condensed_counts: [string, number][];
}

export interface PlotWire {
    plot_id: number;
    axes: { h: AxisWire; v: AxisWire };
    origin: [number, number];
    size: [number, number];
    swapped: boolean;
    context: boolean;
    regions: RegionWire[];
}

export interface VertexWire {
    plot: number;
    x: number;
    y: number;
    raw: [number | null, number | null];
    imputed: boolean;
    context: boolean;
}

export interface PolylineWire {
    case_id: number;
    actual: string;
    predicted: string;
    misclassified: boolean;
    terminal_plot: number;
    terminal_region: number;
    dimmed: boolean;
    summary: string | null;
    summary_count: number;
    vertices: VertexWire[];
}

export interface EvaluationWire {
    error_rate: number;
    classes: string[];
    confusion: number[][];
    per_class: Record<string, { recall: number; one_minus_precision: number }>;
    total: number;
}

export interface SceneOptionsWire {
    trace_mode: 'terminate' | 'full';
    condensed_regions: [number, number][];
    jitter: number;
    context: boolean;
    summary: 'none' | 'centers' | 'minmax';
    case_selection: number[] | null;
}

export interface SceneWire {
    plots: PlotWire[];
    polylines: PolylineWire[];
    evaluation: EvaluationWire;
    options: SceneOptionsWire;
    warnings: string[];
}

export interface ThresholdDelta {
    error_rate_before: number;
    error_rate_after: number;
    changed_cases: number[];
}

export interface TreeNodeWire {
    node_id: number;
    kind: 'split' | 'leaf';
    attribute?: string;
    threshold?: number;
    low?: TreeNodeWire;
    high?: TreeNodeWire;
    class?: string;
    purity_pct?: number;
    count?: number;
}
