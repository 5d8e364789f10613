"""Yoneda products and Massey products in Ext over A(2).

Shows the tau-torsion of h1^4, a few brackets with zero indeterminacy and
the relations e0^2 = d0 g and h1^2 e0 = c0 u.
"""

from steenext.naming import Workspace


def main():
    ws = Workspace.in_memory()

    def ev(text):
        return ws.evaluate("A2", text)

    h1_4 = ev("h1^4")
    print("h1^4 nonzero:", not h1_4.is_zero(), " tau h1^4 zero:", h1_4.tau(1).is_zero())
    for a, b, c in (("h1", "h0", "h1"), ("h0", "h1", "h0"), ("h1", "h2", "h1")):
        co = ws.massey("A2", ev(a), ev(b), ev(c))
        print(f"<{a}, {b}, {c}> = {ws.describe(co.representative, 'A2')}"
              f"  (indeterminacy dim {co.indeterminacy_dim()})")
    print("e0^2 == d0 g:", ev("e0^2") == ev("d0 g"))
    print("h1^2 e0 == c0 u:", ev("h1^2 e0") == ev("c0 u"))
    for k in range(4):
        x = ev("h0 d0" + (f" e0^{k}" if k else ""))
        print(f"h0 d0 e0^{k}: nonzero {not x.is_zero()}, tau^2 multiple zero {x.tau(2).is_zero()}")


if __name__ == "__main__":
    main()
