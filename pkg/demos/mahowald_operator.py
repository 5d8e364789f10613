"""The Mahowald operator over the full motivic Steenrod algebra.

Resolves A through stem 47 (under a minute), forms M h1 = <g2, h0^3, h1>
and restricts it to B, where it becomes (e0 v3^2 + h1^3 v3^3) h1 and the
indeterminacy disappears.
"""

from steenext.naming import Workspace
from steenext.yoneda import mahowald


def main():
    ws = Workspace.in_memory(degree_cap=128)
    ws.ensure("A", 10, 57)
    g2, h0, h1 = (ws.named("A", n) for n in ("g2", "h0", "h1"))
    print("h0^3 g2 = 0:", (h0 ** 3 * g2).is_zero())
    m = mahowald(h1, g2=g2, h0=h0)
    print("M h1 lives in", m.tridegree, "nonzero:", not m.is_zero(),
          "indeterminacy dim:", m.indeterminacy_dim())
    px = ws.restrict(m.representative, "B")
    print("p*(M h1) =", ws.describe(px, "B"))
    expected = ws.evaluate("B", "h1 e0 v3^2 + h1^4 v3^3")
    print("matches (e0 v3^2 + h1^3 v3^3) h1:", px == expected)
    print("indeterminacy restricts to zero:",
          all(ws.restrict(z, "B").is_zero() for z in m.indeterminacy))


if __name__ == "__main__":
    main()
