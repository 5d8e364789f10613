"""Chart output for Ext: TSV tables and SVG Adams charts.

The TSV has one row per F2 basis class of each group Ext(s, f, w), for
weights from the top of the group down to its tau-periodic floor (the
floor row stands for all lower weights).  Reading it back gives the
dimension table exactly.

The SVG draws one dot per cyclic F2[tau]-summand of Ext^{s,f} (so a
tau-periodic tower is one dot, not infinitely many), placed at (s, f);
tau-free summands are circles and tau^k-torsion summands are squares
labelled with k.  Output depends only on the resolution, so it is
byte-for-byte reproducible.
"""

from __future__ import annotations

import json
from importlib import resources

from .f2 import BitMatrix, rank
from .resolution import ExtTable

TSV_HEADER = ("s", "f", "w", "index", "dim", "tau_rank", "floor")
TSV_MAGIC = "# steenext ext chart v1"


def _palette() -> dict:
    return json.loads(resources.files("steenext").joinpath("data/palette.json").read_text())


def chart_rows(table: ExtTable, max_stem: int | None = None, max_f: int | None = None):
    """(s, f, w, index, dim, tau_rank, is_floor) per basis class, sorted."""
    out = []
    for s, f, w, d, tr in table.rows():
        if max_stem is not None and s > max_stem:
            continue
        if max_f is not None and f > max_f:
            continue
        fl = table.floor(s, f)
        for i in range(d):
            out.append((s, f, w, i, d, tr, int(w == fl)))
    return out


def to_tsv(table: ExtTable, algebra: str, max_stem=None, max_f=None) -> str:
    lines = [TSV_MAGIC, f"# algebra={algebra}",
             "# one row per basis class; floor=1 marks the weight below which the group is tau-periodic",
             "\t".join(TSV_HEADER)]
    for row in chart_rows(table, max_stem, max_f):
        lines.append("\t".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def read_tsv(text: str) -> dict:
    """Parse a chart TSV back to ``{(s, f, w): (dim, tau_rank, floor)}``."""
    out: dict = {}
    header = None
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if header is None:
            header = tuple(fields)
            if header != TSV_HEADER:
                raise ValueError(f"unexpected TSV header {header}")
            continue
        s, f, w, _i, d, tr, fl = (int(x) for x in fields)
        out[(s, f, w)] = (d, tr, fl)
    return out


def tau_summands(table: ExtTable, s: int, f: int) -> list[tuple[int, int | None]]:
    """Cyclic F2[tau]-summands of Ext^{s,f}: (generator weight, torsion order or None if free).

    A summand generated in weight w with tau^(j-1) g != 0 is counted by
    rank(tau^(j-1) on Ext_w) - rank(tau^j on Ext_{w+1}) (both landing in
    weight w - j + 1).
    """
    ws = table.weights(s, f)
    if not ws:
        return []
    floor = table.floor(s, f)
    top = ws[0]

    def rk(w, j):
        # rank of tau^j : Ext(w) -> Ext(w - j)
        if w > top or table.dim(s, f, w) == 0:
            return 0
        if j == 0:
            return table.dim(s, f, w)
        return rank(table.tau_power_matrix(s, f, w, j))

    out = []
    for w in range(top, floor - 1, -1):
        depth = w - floor + 1
        n = [rk(w, j - 1) - rk(w + 1, j) for j in range(1, depth + 2)]
        # n[j-1] = summands from w of length >= j; length >= depth + 1 means free
        for j in range(1, depth + 1):
            exact = n[j - 1] - n[j]
            out.extend([(w, j)] * exact)
        out.extend([(w, None)] * n[depth])
    return out


def to_svg(table: ExtTable, algebra: str, max_stem: int | None = None, max_f: int | None = None) -> str:
    pal = _palette()
    ms = table.max_t if max_stem is None else max_stem
    mf = table.max_f if max_f is None else max_f
    cell = 24
    pad = 36
    width = pad * 2 + cell * (ms + 1)
    height = pad * 2 + cell * (mf + 1)

    def xy(s, f):
        return pad + cell * s + cell // 2, height - pad - cell * f - cell // 2

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             f'<title>Ext over {algebra}</title>',
             f'<rect width="{width}" height="{height}" fill="{pal["background"]}"/>']
    for s in range(ms + 1):
        x, _ = xy(s, 0)
        parts.append(f'<line x1="{x}" y1="{pad}" x2="{x}" y2="{height - pad}" stroke="{pal["grid"]}"/>')
        if s % 4 == 0:
            parts.append(f'<text x="{x}" y="{height - pad + 16}" font-size="10" text-anchor="middle" '
                         f'fill="{pal["axis"]}">{s}</text>')
    for f in range(mf + 1):
        _, y = xy(0, f)
        parts.append(f'<line x1="{pad}" y1="{y}" x2="{width - pad}" y2="{y}" stroke="{pal["grid"]}"/>')
        if f % 2 == 0:
            parts.append(f'<text x="{pad - 8}" y="{y + 3}" font-size="10" text-anchor="end" '
                         f'fill="{pal["axis"]}">{f}</text>')
    for f in range(mf + 1):
        for s in range(ms + 1):
            if s + f > table.max_t:
                continue
            summ = tau_summands(table, s, f)
            if not summ:
                continue
            cx, cy = xy(s, f)
            n = len(summ)
            for k, (w, tors) in enumerate(summ):
                dx = (k - (n - 1) / 2) * min(6, 18 / max(n, 1))
                x = cx + dx
                if tors is None:
                    parts.append(f'<circle cx="{x:.1f}" cy="{cy}" r="3" fill="{pal["tau_free"]}">'
                                 f'<title>({s},{f},{w}) tau-free</title></circle>')
                else:
                    parts.append(f'<rect x="{x - 3:.1f}" y="{cy - 3}" width="6" height="6" '
                                 f'fill="{pal["tau_torsion"]}"><title>({s},{f},{w}) tau^{tors}-torsion'
                                 f'</title></rect>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def to_text(table: ExtTable, max_stem=None, max_f=None) -> str:
    """Plain listing: per (s, f), the weights with their dimensions."""
    lines = []
    by_sf: dict = {}
    for s, f, w, d, tr in table.rows():
        if (max_stem is not None and s > max_stem) or (max_f is not None and f > max_f):
            continue
        by_sf.setdefault((s, f), []).append((w, d, tr))
    for (s, f), items in sorted(by_sf.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        fl = table.floor(s, f)
        desc = ", ".join(("w<=" if w == fl else "w=") + f"{w}: {d}"
                         + (f" ({d - tr} tau-torsion)" if tr < d else "") for w, d, tr in items)
        lines.append(f"({s},{f}) {desc}")
    return "\n".join(lines) + "\n"
