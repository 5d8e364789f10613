import struct

import pytest
from hypothesis import given, settings, strategies as st

from steenext.cobar import CobarBlowup, cobar_ext_dims
from steenext.f2 import BitMatrix
from steenext.hopf import preset
from steenext.resolution import (CheckpointError, RegionError, Resolution, checkpoint_load, checkpoint_save,
                                 read_checkpoint, write_checkpoint)


@pytest.fixture(scope="module")
def res_A():
    return Resolution(preset("A")).extend(24, 8)


@pytest.fixture(scope="module")
def res_A2():
    return Resolution(preset("A2")).extend(30, 8)


def _matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix.from_ints([b.vecmul(r).bits for r in a.rows], b.ncols)


def test_exterior_on_tau3_is_polynomial_on_v3():
    r = Resolution(preset("E-tau3", degree_cap=96)).extend(84, 6)
    for f in range(1, 7):
        gens = r.generators(f)
        assert [g.tridegree for g in gens] == [(14 * f, f, 7 * f)]
    tab = r.ext_table()
    assert tab.dim(28, 2, 14) == 1 and tab.dim(28, 2, 15) == 0 and tab.dim(27, 2, 14) == 0


def test_h0_tower_and_low_classes(res_A):
    tab = res_A.ext_table()
    for f in range(0, 8):
        assert tab.dim(0, f, 0) == 1
        assert tab.tau_rank(0, f, 0) == 1
    assert tab.dim(1, 1, 1) == 1 and tab.dim(1, 1, 2) == 0
    assert tab.dim(3, 1, 2) == 1 and tab.dim(7, 1, 4) == 1 and tab.dim(15, 1, 8) == 1
    assert tab.dim(2, 1, 1) == 0


def test_ext_over_B_vanishes_at_g2_degree():
    r = Resolution(preset("B")).extend(45, 6)
    assert r.ext_dim(44, 4, 24) == 0
    assert r.ext_dim(45, 6, 24) == 2


def test_d_squared_and_weights(res_A, res_A2):
    assert res_A.check_d_squared() > 0
    assert res_A2.check_d_squared() > 0


def test_region_error_names_missing_region(res_A):
    with pytest.raises(RegionError, match="needs the resolution through"):
        res_A.ext_dim(40, 2, 20)


def test_resume_equals_uninterrupted():
    a = Resolution(preset("A2")).extend(10, 3).extend(20, 5)
    b = Resolution(preset("A2")).extend(20, 5)
    assert a == b


def test_tau_action_is_coherent(res_A2):
    tab = res_A2.ext_table()
    checked = 0
    for s, f in tab.region():
        for w in tab.weights(s, f):
            m1 = tab.tau_matrix(s, f, w)
            m2 = tab.tau_matrix(s, f, w - 1)
            direct = tab.tau_power_matrix(s, f, w, 2)
            if m1.nrows and m2.nrows:
                assert _matmul(m1, m2).row_ints() == direct.row_ints(), (s, f, w)
                checked += 1
    assert checked > 20


def test_classical_dims_equal_tau_localized_motivic(res_A):
    c = Resolution(preset("A-classical")).extend(20, 6)
    tab, ctab = res_A.ext_table(), c.ext_table()
    for f in range(0, 7):
        for s in range(0, 21):
            assert ctab.dim(s, f, 0) == tab.stable_rank(s, f), (s, f)


def test_floor_is_tau_periodic(res_A2):
    tab = res_A2.ext_table()
    for s, f in tab.region():
        lo = tab.floor(s, f)
        if lo is None:
            continue
        assert tab.dim(s, f, lo) == tab.dim(s, f, lo - 3)
        # at and below the floor tau acts injectively
        assert tab.tau_rank(s, f, lo) == tab.dim(s, f, lo)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 30), st.integers(0, 7))
def test_tau_rank_bounded_by_dim(s, f):
    r = _cached_A2()
    tab = r.ext_table()
    for w in tab.weights(s, f):
        assert 0 <= tab.tau_rank(s, f, w) <= tab.dim(s, f, w)
        assert tab.tau_rank(s, f, w) <= tab.stable_rank(s, f)


_A2 = []


def _cached_A2():
    if not _A2:
        _A2.append(Resolution(preset("A2")).extend(30, 8))
    return _A2[0]


@pytest.mark.parametrize("name", ["A2", "B", "E-tau3"])
def test_cobar_complex_agrees(name):
    p = preset(name)
    t_max, f_max = 16, 4
    r = Resolution(p).extend(t_max, f_max)
    tab = r.ext_table()
    cob = cobar_ext_dims(p, t_max, f_max, max_cells=200_000)
    for f in range(0, f_max + 1):
        for t in range(f, t_max + 1):
            s = t - f
            ws = set(tab.weights(s, f)) | {w for (s2, f2, w) in cob.dims if (s2, f2) == (s, f)}
            if not ws:
                continue
            for w in range(min(ws) - 1, max(ws) + 2):
                assert tab.dim(s, f, w) == cob.dim(s, f, w), (name, s, f, w)


def test_cobar_budget_raises():
    with pytest.raises(CobarBlowup):
        cobar_ext_dims(preset("A"), 16, 5, max_cells=50)


def test_checkpoint_round_trip(tmp_path, res_A2):
    path = tmp_path / "a2.ckpt"
    write_checkpoint(res_A2, path)
    back = read_checkpoint(path)
    assert back == res_A2
    assert back.ext_table().rows() == res_A2.ext_table().rows()


def test_checkpoint_rejects_damage(res_A2):
    blob = checkpoint_save(res_A2)
    with pytest.raises(CheckpointError, match="truncated"):
        checkpoint_load(blob[:-100])
    flipped = bytearray(blob)
    flipped[len(blob) // 2] ^= 0x10
    with pytest.raises(CheckpointError):
        checkpoint_load(bytes(flipped))
    with pytest.raises(CheckpointError, match="magic"):
        checkpoint_load(b"XXXXXXXX" + blob[8:])
    future = blob[:8] + struct.pack("<HH", 2, 0) + blob[12:]
    with pytest.raises(CheckpointError, match="version"):
        checkpoint_load(future)


def test_resume_from_checkpoint_matches(tmp_path):
    r = Resolution(preset("B")).extend(12, 3)
    write_checkpoint(r, tmp_path / "b.ckpt")
    resumed = read_checkpoint(tmp_path / "b.ckpt").extend(24, 5)
    assert resumed == Resolution(preset("B")).extend(24, 5)
