"""Profiles of the motivic dual Steenrod algebra and their Hopf axioms.

Checks that B and A(2) are quotient Hopf algebras, that tau_3 is primitive
in B, that B has the rank of A(2) tensor an exterior algebra on tau_3 in
every bidegree, and that a profile violating the coideal condition is caught.
"""

from steenext.hopf import (MotivicProfile, basis_in_bidegree, check_hopf_axioms, generator, is_primitive,
                           preset, total_rank)


def main():
    for name in ("A2", "B", "E-tau3"):
        p = preset(name)
        print(f"{name:7s} rank {total_rank(p):4d}  axioms: {check_hopf_axioms(p, 64)}")

    b = preset("B")
    print("tau3 primitive in B:", is_primitive(b, generator(b, "tau", 3)))
    a = preset("A")
    print("tau3 primitive in A:", is_primitive(a, generator(a, "tau", 3)))

    a2 = preset("A2")
    rows = []
    for t in range(0, 40, 5):
        nb = sum(len(basis_in_bidegree(b, t, w)) for w in range(t + 1))
        na = sum(len(basis_in_bidegree(a2, t, w)) for w in range(t + 1))
        if t >= 15:
            na += sum(len(basis_in_bidegree(a2, t - 15, w)) for w in range(t + 1))
        rows.append((t, nb, na))
    print("t, dim B*, dim A(2)* (x) E(tau3):", rows)

    # keeps tau_0 and xi_1 but kills tau_1: psi(tau_1) still has xi_1 (x) tau_0
    bad = MotivicProfile("motivic", (2, 0), (4, 1), 32, name="bad")
    print("corrupted profile:", check_hopf_axioms(bad, 32))


if __name__ == "__main__":
    main()
