import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import seeds
from eofkit.ensembles import BadShape
from eofkit.eof import EofConfig, eof_estimate
from eofkit.qstate import maximally_mixed, product_vector, singlet
from eofkit.separability import (
    NotAProjector,
    OverlapConfig,
    alternating_overlap,
    max_product_overlap,
    ppt_check,
    random_density,
    random_separable,
    tiles_projector,
    tiles_upb,
    tiles_upb_state,
)

GOLDEN = json.loads((Path(__file__).parent / "golden" / "tiles_report.json").read_text())
TILES_OVERLAP = GOLDEN["runs"][0]["max_product_overlap"]
TILES_EOF = GOLDEN["runs"][0]["eof_estimate"]


def test_ppt_product_and_singlet():
    v = ppt_check(product_vector([1, 1j], [2, 1]).projector())
    assert v.ppt and v.conclusive
    v = ppt_check(singlet().projector())
    assert not v.ppt and v.conclusive
    assert v.min_pt_eigenvalue == pytest.approx(-0.5, abs=1e-14)


def test_ppt_conclusive_flag():
    assert ppt_check(maximally_mixed((2, 3))).conclusive
    assert ppt_check(maximally_mixed((3, 2))).conclusive
    assert not ppt_check(maximally_mixed((3, 3))).conclusive
    assert not ppt_check(maximally_mixed((2, 4))).conclusive


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 3)]), st.integers(1, 6))
def test_random_separable_is_ppt(seed, dims, k):
    v = ppt_check(random_separable(dims, k, seed))
    assert v.ppt == (v.min_pt_eigenvalue >= -1e-9)
    assert v.ppt


def test_random_separable_contract():
    rho = random_separable((2, 2), 1, 3)
    assert rho.rank() == 1
    assert eof_estimate(rho).value <= 1e-8
    np.testing.assert_array_equal(random_separable((2, 3), 4, 9).matrix, random_separable((2, 3), 4, 9).matrix)
    with pytest.raises(BadShape):
        random_separable((2, 2), 0, 1)


@pytest.mark.parametrize("seed", range(4))
def test_random_separable_has_zero_eof(seed):
    assert eof_estimate(random_separable((2, 2), 4, seed), EofConfig(restarts=8)).value <= 1e-4


def test_random_density_contract():
    assert random_density((2, 3), 1, 0).rank() == 1
    full = random_density((2, 3), 6, 0)
    assert full.eigenvalues().min() > 0
    np.testing.assert_array_equal(random_density((2, 2), 3, 5).matrix, random_density((2, 2), 3, 5).matrix)
    with pytest.raises(BadShape):
        random_density((2, 2), 5, 0)


def test_tiles_construction():
    v = tiles_upb()
    assert np.max(np.abs(v.conj() @ v.T - np.eye(5))) < 1e-15
    p = tiles_projector()
    assert np.max(np.abs(p @ p - p)) < 1e-14
    rho = tiles_upb_state()
    assert np.trace(rho.matrix).real == pytest.approx(1, abs=1e-15)
    assert np.trace(p).real == pytest.approx(4, abs=1e-14)
    assert rho.rank() == 4
    for vec in v:
        assert abs(np.vdot(vec, rho.matrix @ vec)) < 1e-15


def test_tiles_is_ppt_but_inconclusive():
    verdict = ppt_check(tiles_upb_state())
    assert verdict.ppt and not verdict.conclusive


def test_tiles_has_no_product_vector():
    overlap = max_product_overlap(tiles_projector(), (3, 3))
    assert overlap <= 1 - GOLDEN["overlap_margin"]
    assert overlap == pytest.approx(TILES_OVERLAP, abs=1e-8)


def test_tiles_eof_floor():
    res = eof_estimate(tiles_upb_state(), EofConfig(restarts=8))
    assert res.value >= GOLDEN["eof_floor"]
    assert res.value == pytest.approx(TILES_EOF, abs=1e-6)


def test_overlap_trivial_projectors():
    assert max_product_overlap(np.eye(6), (2, 3), OverlapConfig(restarts=3)) == pytest.approx(1, abs=1e-12)
    v = np.kron([0.6, 0.8j], [1, 0, 0])
    assert max_product_overlap(np.outer(v, v.conj()), (2, 3), OverlapConfig(restarts=3)) == pytest.approx(1, abs=1e-10)


def test_overlap_rejects_non_projector():
    with pytest.raises(NotAProjector):
        max_product_overlap(np.eye(4) / 2, (2, 2))


@given(seeds)
@settings(max_examples=20)
def test_alternating_maximization_monotone(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    t = tiles_projector().reshape(3, 3, 3, 3)
    _, _, _, history = alternating_overlap(t, a / np.linalg.norm(a), 200, 1e-12)
    assert np.all(np.diff(history) >= -1e-12)


def test_overlap_monotone_in_restarts():
    p = tiles_projector()
    values = [max_product_overlap(p, (3, 3), OverlapConfig(restarts=k, seed=4)) for k in (1, 5, 20)]
    assert values[0] <= values[1] <= values[2]


@pytest.mark.parametrize("seed", range(6))
def test_two_qubit_ppt_agrees_with_eof(seed):
    rho = random_density((2, 2), 1 + seed % 4, [90, seed])
    res = eof_estimate(rho, EofConfig(restarts=8))
    if res.value <= 1e-6:
        assert ppt_check(rho).ppt
    if not ppt_check(rho).ppt:
        assert res.value >= 1e-3
