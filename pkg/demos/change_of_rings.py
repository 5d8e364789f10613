"""Restriction from Ext over A to Ext over B and A(2).

Restriction is a ring map; over B the image of e0 picks up an h1^3 v3
term, while over A(2) it is just e0.
"""

from steenext.naming import Workspace


def main():
    ws = Workspace.in_memory(degree_cap=128)
    for name in ("h0", "h1", "h2", "h3", "c0", "d0", "e0"):
        x = ws.named("A", name)
        to_b = ws.describe(ws.restrict(x, "B"), "B")
        to_a2 = ws.describe(ws.restrict(x, "A2"), "A2")
        print(f"{name:3s} -> B: {to_b:18s} A(2): {to_a2}")
    x, y = ws.named("A", "h1"), ws.named("A", "e0")
    lhs = ws.restrict(ws.product("A", x, y), "B")
    rhs = ws.product("B", ws.restrict(x, "B"), ws.restrict(y, "B"))
    print("p*(h1 e0) == p*(h1) p*(e0):", lhs == rhs)


if __name__ == "__main__":
    main()
