"""Resolve Ext over A(2) and E(tau_3), print text charts and write an SVG.

The text chart lists dimensions by (s, f) with the weights present; the
SVG shows one marker per F2[tau]-summand, squares for tau-torsion.
"""

import sys
from pathlib import Path

from steenext.chart import to_svg, to_text, to_tsv
from steenext.hopf import preset
from steenext.resolution import Resolution


def main(out_dir="."):
    r = Resolution(preset("E-tau3")).extend(45, 3)
    print(to_text(r.ext_table(), 45, 3))

    r = Resolution(preset("A2")).extend(30, 8)
    tab = r.ext_table()
    print(to_text(tab, 20, 6))
    out = Path(out_dir)
    (out / "ext_A2.svg").write_text(to_svg(tab, "A2", 30, 8))
    (out / "ext_A2.tsv").write_text(to_tsv(tab, "A2"))
    print(f"wrote {out / 'ext_A2.svg'} and {out / 'ext_A2.tsv'}")


if __name__ == "__main__":
    main(*sys.argv[1:])
