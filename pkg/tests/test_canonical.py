"""Tests for regularity predicates and the bordered normal form."""

import numpy as np
import pytest

from cmspaces.canonical import (
    RegularityReport,
    conjugation_operator,
    in_regular_locus,
    is_gauge_regular,
    is_regular_semisimple,
    normalize,
    orbit_dimension,
    regularity_report,
)
from cmspaces.chart import is_normal_form
from cmspaces.errors import DegenerateSpectrumError, ZeroRowEntryError
from cmspaces.linalg import frob
from cmspaces.variety import (
    AugmentedPair,
    augment,
    gauge_act_pair,
    on_level,
    pair_fingerprint,
    random_gauge,
    random_point,
)


def _pair(n, seed, tau=1.0):
    return augment(random_point(n, 2, tau, seed))


def test_regular_semisimple_predicate():
    assert is_regular_semisimple(np.diag([1.0, 2.0, 3.0]))
    assert not is_regular_semisimple(np.eye(2))
    # a Jordan block has a degenerate spectrum
    assert not is_regular_semisimple(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_conjugation_operator_kernel_is_block_centralizer():
    # block basechanges act on a 3 x 3 matrix through diag(xi, 0); for a
    # diagonal target the kernel is the 2-dim diagonal algebra
    M = np.diag([1.0, 2.0, 4.0])
    L = conjugation_operator(M)
    assert L.shape == (9, 4)
    s = np.linalg.svd(L, compute_uv=False)
    assert np.sum(s < 1e-12) == 2


def test_orbit_dimension_values():
    # a diagonal matrix keeps its diagonal centralizer: orbit n^2 - n
    assert orbit_dimension(np.diag([1.0, 2.0, 3.0])) == 2
    assert orbit_dimension(np.eye(3)) == 0
    # a full border breaks the centralizer completely
    M = np.array([[1.0, 0.0, 1.0],
                  [0.0, 2.0, 1.0],
                  [1.0, 1.0, 0.0]])
    assert orbit_dimension(M) == 4


def test_gauge_regular_examples():
    assert not is_gauge_regular(np.diag([1.0, 5.0, 9.0]))
    M = np.array([[1.0, 0.0, 1.0],
                  [0.0, 2.0, 1.0],
                  [1.0, 1.0, 0.0]])
    assert is_gauge_regular(M)


def test_seeded_pairs_sit_in_the_regular_locus():
    for seed in range(6):
        n = 1 + seed % 5
        p = _pair(n, 70 + seed)
        assert in_regular_locus(p)
        rep = regularity_report(p)
        assert isinstance(rep, RegularityReport)
        assert rep.block_regular_semisimple
        assert rep.full_regular_semisimple
        assert rep.orbit_dim == n * n
        assert rep.min_gap > 0.0


def test_normalize_produces_the_stated_shape():
    p = _pair(4, 80)
    nf, gauge = normalize(p)
    n = p.n
    block = nf.A[:n, :n]
    # exact after snapping
    assert np.array_equal(block, np.diag(np.diag(block)))
    assert np.array_equal(nf.A[n, :n], np.ones(n))
    lam = np.diag(block)
    order = np.lexsort((lam.imag, lam.real))
    assert np.array_equal(order, np.arange(n))
    assert is_normal_form(nf)
    # the returned gauge is the certificate
    q = gauge_act_pair(gauge, p)
    assert frob(q.A - nf.A) + frob(q.B - nf.B) < 1e-9 * max(1.0, frob(p.A) * frob(p.B))


def test_normalize_is_constant_on_orbits():
    p = _pair(3, 81)
    g = random_gauge(3, 82)
    nf1, _ = normalize(p)
    nf2, _ = normalize(gauge_act_pair(g, p))
    scale = max(1.0, frob(nf1.A), frob(nf1.B))
    assert frob(nf1.A - nf2.A) < 1e-8 * scale
    assert frob(nf1.B - nf2.B) < 1e-8 * scale


def test_normalize_is_idempotent():
    p = _pair(3, 83)
    nf, _ = normalize(p)
    again, gauge = normalize(nf)
    assert frob(again.A - nf.A) + frob(again.B - nf.B) < 1e-12 * max(1.0, frob(nf.A))
    assert frob(gauge.g - np.eye(3)) < 1e-9


def test_normalize_keeps_the_level():
    p = _pair(4, 84)
    nf, _ = normalize(p)
    assert on_level(nf, tol=1e-9)
    f0, f1 = pair_fingerprint(p), pair_fingerprint(nf)
    assert np.abs(f0 - f1).max() < 1e-8 * max(1.0, np.abs(f0).max())


def test_normalize_respects_a_reference_ordering():
    p = _pair(3, 85)
    nf, _ = normalize(p)
    lam = np.diag(nf.A[:3, :3])
    ref = lam[::-1]
    nf_ref, _ = normalize(p, lam_ref=ref)
    np.testing.assert_allclose(np.diag(nf_ref.A[:3, :3]), ref, atol=1e-10)


def test_normalize_rejects_degenerate_block():
    A = np.zeros((3, 3), dtype=complex)
    A[:2, :2] = np.eye(2)  # repeated block eigenvalue
    A[2, :2] = 1.0
    p = AugmentedPair(A, np.eye(3), 1.0)
    with pytest.raises(DegenerateSpectrumError):
        normalize(p)


def test_normalize_rejects_vanishing_row_entry():
    # block already diagonal, border row with a hard zero
    A = np.array([[1.0, 0.0, 1.0],
                  [0.0, 2.0, 1.0],
                  [0.0, 1.0, 0.0]], dtype=complex)
    p = AugmentedPair(A, np.eye(3), 1.0)
    with pytest.raises(ZeroRowEntryError):
        normalize(p)
