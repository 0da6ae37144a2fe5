"""Deterministic SVG renderers and the drift-map layout document.

SVG is emitted as plain text with fixed number formatting so identical
reports produce identical bytes.
"""

from __future__ import annotations

import functools


@functools.lru_cache(maxsize=1)
def plasma_lut() -> tuple[tuple[int, int, int], ...]:
    """256-entry RGB lookup table of the plasma colormap (0 -> blue, 1 -> yellow)."""
    from matplotlib import colormaps

    cmap = colormaps["plasma"]
    return tuple(
        tuple(int(round(ch * 255)) for ch in cmap(i / 255.0)[:3]) for i in range(256)
    )


def value_to_hex(v: float) -> str:
    lut = plasma_lut()
    idx = int(round(max(0.0, min(1.0, v)) * 255))
    r, g, b = lut[idx]
    return f"#{r:02x}{g:02x}{b:02x}"


def _band_label(cluster: dict) -> str:
    return f"cluster {cluster['id']} [{','.join(cluster['tags'])}]"


def drift_map_layout(report: dict) -> dict:
    """Row/band/line layout for the drift map, consumed by the web client.

    Rows appear cluster by cluster (ranked by erratic, descending), each
    cluster's rows ordered by closeness to the cluster mean, with the stable
    band last.
    """
    rows = []
    bands = []
    for cluster in report["clusters"]:
        start = len(rows)
        for member in cluster["members"]:
            rows.append(
                {
                    "label": member["label"],
                    "constraint": member["constraint"],
                    "cluster": cluster["id"],
                    "values": member["values"],
                }
            )
        bands.append(
            {
                "cluster": cluster["id"],
                "label": _band_label(cluster),
                "start": start,
                "end": len(rows),
                "tags": cluster["tags"],
                "change_points": cluster["change_points"],
            }
        )
    stable = report.get("stable_band") or {"members": []}
    if stable["members"]:
        start = len(rows)
        for member in stable["members"]:
            rows.append(
                {
                    "label": member["label"],
                    "constraint": member["constraint"],
                    "cluster": "stable",
                    "values": member["values"],
                }
            )
        bands.append(
            {
                "cluster": "stable",
                "label": f"stable [{len(stable['members'])} constraints]",
                "start": start,
                "end": len(rows),
                "tags": ["stable"],
                "change_points": [],
            }
        )
    return {
        "n_windows": len(report["windows"]),
        "window_labels": [w["span"][0] for w in report["windows"]],
        "rows": rows,
        "bands": bands,
        "lines": [{"window": k, "scope": "global"} for k in report["global_change_points"]],
        "colormap": {"name": "plasma", "rgb": [list(c) for c in plasma_lut()]},
    }


CELL_W = 12
CELL_H = 3
MARGIN_LEFT = 160
MARGIN_TOP = 24


def render_drift_map(report: dict) -> str:
    """SVG heat map: one row per retained constraint, one column per window."""
    layout = drift_map_layout(report)
    n_win = layout["n_windows"]
    n_rows = len(layout["rows"])
    width = MARGIN_LEFT + n_win * CELL_W + 20
    height = MARGIN_TOP + max(n_rows, 1) * CELL_H + 30
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{MARGIN_LEFT}" y="14" font-size="11" font-family="sans-serif">'
        f"drift map: {n_rows} constraints x {n_win} windows</text>",
    ]
    for r, row in enumerate(layout["rows"]):
        y = MARGIN_TOP + r * CELL_H
        values = row["values"]
        c = 0
        while c < n_win:  # run-length merge equal-colored cells
            color = value_to_hex(values[c])
            c2 = c + 1
            while c2 < n_win and value_to_hex(values[c2]) == color:
                c2 += 1
            x = MARGIN_LEFT + c * CELL_W
            out.append(
                f'<rect x="{x}" y="{y}" width="{(c2 - c) * CELL_W}" '
                f'height="{CELL_H}" fill="{color}"/>'
            )
            c = c2
    for band in layout["bands"]:
        y0 = MARGIN_TOP + band["start"] * CELL_H
        y1 = MARGIN_TOP + band["end"] * CELL_H
        out.append(
            f'<line x1="{MARGIN_LEFT}" y1="{y0}" x2="{MARGIN_LEFT + n_win * CELL_W}" '
            f'y2="{y0}" stroke="black" stroke-width="0.5"/>'
        )
        label_y = min(y0 + 10, y1 - 1)
        out.append(
            f'<text x="4" y="{label_y}" font-size="9" font-family="sans-serif">'
            f"{band['label']}</text>"
        )
        for k in band["change_points"]:
            x = MARGIN_LEFT + k * CELL_W
            out.append(
                f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" '
                f'stroke="white" stroke-width="1.2"/>'
            )
    map_h = max(len(layout["rows"]), 1) * CELL_H
    for line in layout["lines"]:
        x = MARGIN_LEFT + line["window"] * CELL_W
        out.append(
            f'<line x1="{x}" y1="{MARGIN_TOP}" x2="{x}" y2="{MARGIN_TOP + map_h}" '
            f'stroke="black" stroke-width="1" stroke-dasharray="4,3"/>'
        )
    out.append(
        f'<text x="{MARGIN_LEFT}" y="{MARGIN_TOP + map_h + 16}" font-size="9" '
        f'font-family="sans-serif">windows 0..{max(n_win - 1, 0)}'
        f" | dashed lines: log-wide change points</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


CHART_W = 640
CHART_H = 240
CHART_ML = 48
CHART_MT = 24
CHART_MB = 32


def chart_data(report: dict, cluster_id: int) -> dict:
    for cluster in report["clusters"]:
        if cluster["id"] == cluster_id:
            return {
                "cluster": cluster_id,
                "windows": [w["index"] for w in report["windows"]],
                "window_starts": [w["span"][0] for w in report["windows"]],
                "mean_series": cluster["mean_series"],
                "change_points": cluster["change_points"],
                "case_count": cluster["case_count"],
                "tags": cluster["tags"],
            }
    raise KeyError(f"no cluster with id {cluster_id}")


def render_drift_chart(report: dict, cluster_id: int) -> str:
    """SVG line chart of a cluster's mean confidence series on a [0,1] axis."""
    data = chart_data(report, cluster_id)
    series = data["mean_series"]
    n = len(series)
    plot_w = CHART_W - CHART_ML - 12
    plot_h = CHART_H - CHART_MT - CHART_MB

    def px(i: int) -> float:
        return CHART_ML + (plot_w * i / max(n - 1, 1))

    def py(v: float) -> float:
        return CHART_MT + plot_h * (1.0 - max(0.0, min(1.0, v)))

    pts = " ".join(f"{px(i):.2f},{py(v):.2f}" for i, v in enumerate(series))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CHART_W}" height="{CHART_H}" '
        f'viewBox="0 0 {CHART_W} {CHART_H}">',
        f'<rect width="{CHART_W}" height="{CHART_H}" fill="white"/>',
        f'<text x="{CHART_ML}" y="14" font-size="11" font-family="sans-serif">'
        f"cluster {cluster_id} mean confidence [{','.join(data['tags'])}] "
        f"&#8212; {data['case_count']} cases</text>",
    ]
    for v in (0.0, 0.5, 1.0):
        y = py(v)
        out.append(
            f'<line x1="{CHART_ML}" y1="{y:.2f}" x2="{CHART_ML + plot_w}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{CHART_ML - 6}" y="{y + 3:.2f}" font-size="9" text-anchor="end" '
            f'font-family="sans-serif">{v:.1f}</text>'
        )
    for k in data["change_points"]:
        x = px(k)
        out.append(
            f'<line x1="{x:.2f}" y1="{CHART_MT}" x2="{x:.2f}" y2="{CHART_MT + plot_h}" '
            f'stroke="#d62728" stroke-width="1" stroke-dasharray="4,3"/>'
        )
    out.append(
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
    )
    out.append(
        f'<text x="{CHART_ML}" y="{CHART_H - 8}" font-size="9" font-family="sans-serif">'
        f"windows 0..{n - 1}</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_acf_chart(report: dict, cluster_id: int) -> str:
    """SVG bar chart of a cluster's autocorrelation with the significance band."""
    cluster = next((c for c in report["clusters"] if c["id"] == cluster_id), None)
    if cluster is None:
        raise KeyError(f"no cluster with id {cluster_id}")
    acf = cluster["acf"]
    values = acf["values"]
    band = acf["band"]
    n = len(values)
    plot_w = CHART_W - CHART_ML - 12
    plot_h = CHART_H - CHART_MT - CHART_MB
    mid_y = CHART_MT + plot_h / 2.0

    def px(i: int) -> float:
        return CHART_ML + (plot_w * (i + 0.5) / n)

    def py(v: float) -> float:
        return mid_y - (plot_h / 2.0) * max(-1.0, min(1.0, v))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CHART_W}" height="{CHART_H}" '
        f'viewBox="0 0 {CHART_W} {CHART_H}">',
        f'<rect width="{CHART_W}" height="{CHART_H}" fill="white"/>',
        f'<text x="{CHART_ML}" y="14" font-size="11" font-family="sans-serif">'
        f"cluster {cluster_id} autocorrelation</text>",
        f'<line x1="{CHART_ML}" y1="{mid_y:.2f}" x2="{CHART_ML + plot_w}" '
        f'y2="{mid_y:.2f}" stroke="#888888" stroke-width="1"/>',
    ]
    for sign in (1.0, -1.0):
        y = py(sign * band)
        out.append(
            f'<line x1="{CHART_ML}" y1="{y:.2f}" x2="{CHART_ML + plot_w}" y2="{y:.2f}" '
            f'stroke="#1f77b4" stroke-width="0.8" stroke-dasharray="5,3"/>'
        )
    bar_w = max(plot_w / n - 2.0, 1.0)
    for i, v in enumerate(values):
        x = px(i) - bar_w / 2.0
        y0, y1 = sorted((py(0.0), py(v)))
        color = "#d62728" if acf["significant"][i] else "#444444"
        out.append(
            f'<rect x="{x:.2f}" y="{y0:.2f}" width="{bar_w:.2f}" '
            f'height="{max(y1 - y0, 0.5):.2f}" fill="{color}"/>'
        )
    out.append(
        f'<text x="{CHART_ML}" y="{CHART_H - 8}" font-size="9" font-family="sans-serif">'
        f"lags 0..{n - 1} | dashed: &#177;1.96/&#8730;n</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
