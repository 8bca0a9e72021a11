"""Deterministic SVG rendering of scenes for static figures and golden tests.

Element order (plots by id, then regions in plot order, then polylines by
case id) and fixed 4-decimal number formatting make the output byte-stable,
so rendered figures can be compared against committed golden files.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .scene import SceneGraph

DEFAULT_COLORS = ("#2e7d32", "#c62828", "#1565c0", "#ef6c00", "#6a1b9a", "#00838f")
GRAY_LUMA_LO = 0.35
GRAY_LUMA_HI = 0.75


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderConfig:
    canvas: tuple[int, int] = (1280, 720)
    palette: dict[str, str] | None = None  # class -> "#rrggbb"
    margin: float = 40.0
    stroke_width: float = 1.2
    vertex_radius: float = 2.4
    font: str = "monospace"
    font_size: float = 11.0
    show_legend: bool = True
    show_confusion: bool = True


def _fmt(x: float) -> str:
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


def _hex(rgb: tuple[float, float, float]) -> str:
    return "#" + "".join(f"{max(0, min(255, round(c * 255))):02x}" for c in rgb)


def _class_color(cls: str, classes: tuple[str, ...], palette: dict[str, str] | None) -> str:
    if palette is not None:
        if cls not in palette:
            raise RenderError(f"palette does not cover class {cls!r}")
        return palette[cls]
    try:
        i = classes.index(cls)
    except ValueError:
        i = len(classes)
    return DEFAULT_COLORS[i % len(DEFAULT_COLORS)]


def _mix_with_white(color: str, intensity: float) -> str:
    """intensity 1 = full color, lower values fade towards white."""
    r = int(color[1:3], 16) / 255
    g = int(color[3:5], 16) / 255
    b = int(color[5:7], 16) / 255
    mix = lambda c: c * intensity + 1.0 * (1.0 - intensity)
    return _hex((mix(r), mix(g), mix(b)))


def _gray_shade(shade_key: int, n_shades: int) -> str:
    if n_shades <= 1:
        luma = (GRAY_LUMA_LO + GRAY_LUMA_HI) / 2
    else:
        luma = GRAY_LUMA_HI - (GRAY_LUMA_HI - GRAY_LUMA_LO) * shade_key / (n_shades - 1)
    return _hex((luma, luma, luma))


def to_svg(scene: SceneGraph, config: RenderConfig | None = None) -> str:
    """Standalone SVG document; byte-identical across runs for equal inputs."""
    cfg = config or RenderConfig()
    width, height = cfg.canvas

    classes = scene.evaluation.classes

    # scene bounding box over placed plots
    xs: list[float] = []
    ys: list[float] = []
    for sp in scene.plots:
        ox, oy = sp.placement.origin
        w, h = sp.placement.size
        xs += [ox, ox + w]
        ys += [oy, oy + h]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    span_x = max(max_x - min_x, 1e-9)
    span_y = max(max_y - min_y, 1e-9)
    scale = min((width - 2 * cfg.margin) / span_x, (height - 2 * cfg.margin) / span_y)

    def to_px(x: float, y: float) -> tuple[float, float]:
        return (
            cfg.margin + (x - min_x) * scale,
            height - cfg.margin - (y - min_y) * scale,  # svg y grows downward
        )

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')

    def rect(x0: float, y0: float, x1: float, y1: float, fill: str, extra: str = "") -> str:
        px0, py0 = to_px(x0, y1)  # top-left in svg space
        px1, py1 = to_px(x1, y0)
        return (
            f'<rect x="{_fmt(px0)}" y="{_fmt(py0)}" width="{_fmt(px1 - px0)}" '
            f'height="{_fmt(py1 - py0)}" fill="{fill}"{extra}/>'
        )

    for sp in sorted(scene.plots, key=lambda s: s.plot_id):
        p = sp.placement
        ox, oy = p.origin
        w, h = p.size
        out.append(f'<g id="plot-{sp.plot_id}">')
        out.append(rect(ox, oy, ox + w, oy + h, "#fafafa", ' stroke="#444444" stroke-width="1"'))
        unit = sp.unit
        if unit is not None:
            n_shades = sum(1 for r in unit.regions if r.kind == "undecided")
            h_lo, h_hi = unit.h_range
            v_lo, v_hi = unit.v_range

            def local(u: float, v: float) -> tuple[float, float]:
                uu = (u - h_lo) / (h_hi - h_lo)
                vv = (v - v_lo) / (v_hi - v_lo)
                if p.h_flipped:
                    uu = 1.0 - uu
                if p.v_flipped:
                    vv = 1.0 - vv
                if p.swapped:
                    uu, vv = vv, uu
                return ox + uu * w, oy + vv * h

            for sr in sp.regions:
                r = sr.region
                if r.kind == "decided":
                    fill = _mix_with_white(
                        _class_color(r.class_name, classes, cfg.palette), sr.intensity
                    )
                else:
                    fill = _gray_shade(r.shade_key, n_shades)
                ax, ay = local(r.h_interval[0], r.v_interval[0])
                bx, by = local(r.h_interval[1], r.v_interval[1])
                out.append(rect(min(ax, bx), min(ay, by), max(ax, bx), max(ay, by), fill,
                                ' stroke="#666666" stroke-width="0.5"'))
        label = f"{sp.h_attr} / {sp.v_attr}" + (" (context)" if sp.is_context else "")
        lx, ly = to_px(ox, oy)
        out.append(
            f'<text x="{_fmt(lx)}" y="{_fmt(ly + cfg.font_size + 2)}" '
            f'font-family="{cfg.font}" font-size="{_fmt(cfg.font_size)}" '
            f'fill="#222222">{label}</text>'
        )
        out.append("</g>")

    for pl in sorted(scene.polylines, key=lambda q: (q.summary_kind is not None, q.case_id)):
        color = _class_color(pl.predicted_class, classes, cfg.palette)
        opacity = "0.25" if pl.dimmed else ("0.9" if pl.summary_kind else "0.6")
        pts = " ".join(
            "{},{}".format(*map(_fmt, to_px(v.x, v.y))) for v in pl.vertices
        )
        sw = cfg.stroke_width * (2.0 if pl.summary_kind else 1.0)
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(sw)}" stroke-opacity="{opacity}"/>'
        )
        for v in pl.vertices:
            px, py = to_px(v.x, v.y)
            out.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(cfg.vertex_radius)}" '
                f'fill="{color}" fill-opacity="{opacity}"/>'
            )
        if pl.misclassified and not pl.dimmed and pl.vertices:
            v = pl.vertices[-1]
            px, py = to_px(v.x, v.y)
            out.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(cfg.vertex_radius * 2)}" '
                f'fill="none" stroke="#ff1744" stroke-width="{_fmt(cfg.stroke_width)}"/>'
            )

    y_cursor = cfg.margin
    if cfg.show_legend:
        for i, cls in enumerate(classes):
            color = _class_color(cls, classes, cfg.palette)
            out.append(
                f'<rect x="{_fmt(width - 180.0)}" y="{_fmt(y_cursor)}" width="12" height="12" '
                f'fill="{color}"/>'
            )
            out.append(
                f'<text x="{_fmt(width - 162.0)}" y="{_fmt(y_cursor + 10.0)}" '
                f'font-family="{cfg.font}" font-size="{_fmt(cfg.font_size)}" '
                f'fill="#222222">{cls}</text>'
            )
            y_cursor += 16.0
    if cfg.show_confusion:
        ev = scene.evaluation
        out.append(
            f'<text x="{_fmt(width - 180.0)}" y="{_fmt(y_cursor + 14.0)}" '
            f'font-family="{cfg.font}" font-size="{_fmt(cfg.font_size)}" '
            f'fill="#222222">error {ev.error_rate:.4f}</text>'
        )
        y_cursor += 16.0
        for i, cls in enumerate(classes):
            row = " ".join(str(n) for n in ev.confusion[i])
            out.append(
                f'<text x="{_fmt(width - 180.0)}" y="{_fmt(y_cursor + 14.0)}" '
                f'font-family="{cfg.font}" font-size="{_fmt(cfg.font_size)}" '
                f'fill="#222222">{row}</text>'
            )
            y_cursor += 14.0

    out.append("</svg>")
    return "\n".join(out) + "\n"
