import itertools

import pytest
from hypothesis import given, settings, strategies as st

from steenext.hopf import (MilnorElement, Monomial, MotivicProfile, basis_in_bidegree, basis_in_degree,
                           check_hopf_axioms, coproduct, coproduct_from_generators, exps_weight, generator,
                           is_primitive, milnor_multiply, milnor_multiply_by_pairing, preset, total_rank)


def test_ranks_of_finite_profiles():
    assert total_rank(preset("A2")) == 64
    assert total_rank(preset("B")) == 128
    assert total_rank(preset("E-tau3")) == 2
    assert total_rank(preset("A2-classical")) == 64


def test_generator_bidegrees():
    p = preset("A")
    assert generator(p, "tau", 0).bidegree(p) == (1, 0)
    assert generator(p, "tau", 3).bidegree(p) == (15, 7)
    assert generator(p, "xi", 2).bidegree(p) == (6, 3)


def test_unknown_preset_and_cap():
    with pytest.raises(ValueError):
        preset("C")
    with pytest.raises(ValueError):
        basis_in_degree(preset("A", degree_cap=10), 11)


def test_tau0_squared_relation():
    p = preset("B")
    t0 = generator(p, "tau", 0)
    from steenext.hopf import multiply_monomials
    assert multiply_monomials(p, t0, t0) == Monomial(generator(p, "xi", 1).exps, 1)


def test_coproduct_of_tau1():
    p = preset("A")
    m = generator(p, "tau", 1)
    expect = {(m, Monomial()), (Monomial(), m), (generator(p, "xi", 1), generator(p, "tau", 0))}
    assert set(coproduct(p, m)) == expect


def test_tau3_primitive_in_B_not_in_A():
    assert is_primitive(preset("B"), generator(preset("B"), "tau", 3))
    assert not is_primitive(preset("A"), generator(preset("A"), "tau", 3))


def test_splitting_rank_bidegreewise():
    pb, pa = preset("B"), preset("A2")
    for t in range(0, 64):
        for w in range(0, 40):
            nb = len(basis_in_bidegree(pb, t, w))
            na = len(basis_in_bidegree(pa, t, w))
            if t >= 15 and w >= 7:
                na += len(basis_in_bidegree(pa, t - 15, w - 7))
            assert nb == na, (t, w)


def test_adem_relation_motivic_and_classical():
    p = preset("A")
    sq2 = MilnorElement.dual(generator(p, "xi", 1))
    lhs = milnor_multiply(p, sq2, sq2)
    assert lhs == MilnorElement(frozenset({((1, 1), 1)}))  # tau Q0 Q1
    pc = preset("A-classical")
    sq2c = MilnorElement.dual((2,))
    assert milnor_multiply(pc, sq2c, sq2c) == MilnorElement(frozenset({((1, 1), 0)}))


def _basis_pairs(p, t_max):
    out = []
    for ta in range(t_max + 1):
        for tb in range(t_max + 1 - ta):
            for a in basis_in_degree(p, ta):
                for b in basis_in_degree(p, tb):
                    out.append((a, b))
    return out


@pytest.mark.parametrize("name,t_max", [("B", 12), ("A2", 12), ("A", 12), ("A2-classical", 12)])
def test_milnor_product_matches_pairing(name, t_max):
    p = preset(name)
    for a, b in _basis_pairs(p, t_max):
        x, y = MilnorElement.dual(a), MilnorElement.dual(b)
        assert milnor_multiply(p, x, y) == milnor_multiply_by_pairing(p, x, y), (a, b)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_milnor_product_matches_pairing_sampled_to_24(data):
    p = preset("B")
    ta = data.draw(st.integers(0, 24))
    tb = data.draw(st.integers(0, 24 - ta))
    ba, bb = basis_in_degree(p, ta), basis_in_degree(p, tb)
    if not ba or not bb:
        return
    a = data.draw(st.sampled_from(ba))
    b = data.draw(st.sampled_from(bb))
    x, y = MilnorElement.dual(a), MilnorElement.dual(b)
    prod = milnor_multiply(p, x, y)
    assert prod == milnor_multiply_by_pairing(p, x, y)
    # bidegree additivity
    bd = {(ta + tb, p.weight(a) + p.weight(b))}
    assert not prod or prod.bidegree(p) == bd


def test_coproduct_matches_generator_formula():
    p = preset("A")
    for t in range(0, 20):
        for e in basis_in_degree(p, t):
            m = Monomial(e)
            assert coproduct(p, m) == coproduct_from_generators(p, m)


@pytest.mark.parametrize("name,t_max", [("B", 64), ("A2", 64), ("E-tau3", 20), ("B-classical", 40)])
def test_hopf_axioms_pass(name, t_max):
    rep = check_hopf_axioms(preset(name), t_max)
    assert rep.ok, str(rep)


def test_corrupted_profile_is_rejected():
    # killing tau_1 while keeping xi_1 and tau_0: psi(tau_1) has the surviving
    # term xi_1 (x) tau_0, so the ideal is not a coideal
    bad = MotivicProfile("motivic", (2, 0), (4, 1), 32, name="bad")
    rep = check_hopf_axioms(bad, 32)
    assert not rep.ok
    assert "tau" in rep.witness


def test_profile_description_round_trip():
    for name in ("A", "A2", "B", "E-tau3", "B-classical", "A-classical"):
        p = preset(name)
        assert MotivicProfile.from_description(p.describe()) == p
