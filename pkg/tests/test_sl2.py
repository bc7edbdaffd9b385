"""Tests for the two-by-two group layer: elements, exponentials, the action
on quadruples and pairs, and the induced chart fields."""

import numpy as np
import pytest
import scipy.linalg

from cmspaces.errors import RootFindingError, ShapeMismatchError, ZeroPairError
from cmspaces.linalg import frob
from cmspaces.sl2 import (
    GEN_E,
    GEN_F,
    GEN_H,
    SL2Element,
    act_components,
    act_pair,
    analytic_field,
    find_independence_point,
    fixed_point_probe,
    independence_rank,
    numeric_field,
    power_sums,
    power_sums_to_eigs,
    random_sl2,
    sl2_exp,
    slice_tangency,
)
from cmspaces.chart import from_chart, slice_residual, to_chart
from cmspaces.variety import (
    augment,
    level_residual,
    level_scale,
    pair_moment,
    pair_scale,
    random_point,
)


def test_sl2_element_rejects_bad_determinant():
    with pytest.raises(ShapeMismatchError):
        SL2Element(2.0, 0.0, 0.0, 1.0)


def test_sl2_compose_and_inverse():
    g = random_sl2(3)
    h = random_sl2(4)
    gi = g.inverse()
    np.testing.assert_allclose(g.compose(gi).matrix(), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(
        g.compose(h).matrix(), g.matrix() @ h.matrix(), atol=1e-12
    )


def test_generator_exponentials_closed_forms():
    t = 0.7
    np.testing.assert_allclose(GEN_E.exp(t).matrix(), [[1, 0], [t, 1]], atol=1e-15)
    np.testing.assert_allclose(GEN_F.exp(t).matrix(), [[1, t], [0, 1]], atol=1e-15)
    np.testing.assert_allclose(
        GEN_H.exp(t).matrix(), np.diag([np.exp(t), np.exp(-t)]), atol=1e-15
    )


def test_sl2_exp_matches_scipy_expm():
    rng = np.random.default_rng(14)
    for _ in range(20):
        X = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        X = X - 0.5 * np.trace(X) * np.eye(2)  # traceless
        want = scipy.linalg.expm(X)
        got = sl2_exp(X).matrix()
        np.testing.assert_allclose(got, want, atol=1e-12 * max(1.0, frob(want)))
    # tiny arguments go through the series branch
    X = np.array([[1e-9, 2e-9], [0.0, -1e-9]])
    np.testing.assert_allclose(sl2_exp(X).matrix(), scipy.linalg.expm(X), atol=1e-15)


def test_action_routes_agree_bitwise():
    r = random_point(3, 2, 1.0, 15)
    for seed in range(5):
        g = random_sl2(20 + seed)
        via_components = augment(act_components(g, r))
        via_pair = act_pair(g, augment(r))
        assert np.array_equal(via_components.A, via_pair.A)
        assert np.array_equal(via_components.B, via_pair.B)


def test_action_needs_two_columns():
    with pytest.raises(ShapeMismatchError):
        act_components(random_sl2(1), random_point(2, 1, 1.0, 2))


def test_action_preserves_the_moment():
    for seed in range(10):
        n = 1 + seed % 5
        r = random_point(n, 2, 1.0, 30 + seed)
        g = random_sl2(60 + seed)
        moved = act_components(g, r)
        assert level_residual(moved) < 1e-10 * level_scale(r)
        p = act_pair(g, augment(r))
        dev = frob(pair_moment(p) - pair_moment(augment(r)))
        assert dev < 1e-10 * pair_scale(p)


def test_non_unimodular_matrix_breaks_the_level():
    r = random_point(3, 2, 1.0, 44)
    p = act_pair(np.array([[2.0, 0.0], [0.0, 1.0]]), augment(r))
    from cmspaces.variety import level_deviation

    assert level_deviation(p) > 1e-3 * pair_scale(p)


def test_scaling_probe_separates_points():
    for seed in range(8):
        r = random_point(2 + seed % 3, 2, 1.0, 50 + seed)
        if abs(np.trace(r.A @ r.A)) < 1e-3:
            continue
        before, after, sep = fixed_point_probe(r, 1.0)
        assert sep > 1e-6 * max(1.0, float(np.abs(before).max()))


def test_probe_rejects_degenerate_input():
    r = random_point(2, 2, 1.0, 57)
    with pytest.raises(ValueError):
        fixed_point_probe(r, 0.0)
    from cmspaces.variety import Representation

    z = Representation(np.zeros((2, 2)), np.zeros((2, 2)),
                       np.zeros((2, 2)), np.zeros((2, 2)), 0.0)
    with pytest.raises(ZeroPairError):
        fixed_point_probe(z, 1.0)


def test_power_sums_hand_case_and_round_trip():
    M = np.diag([1.0, -1.0])
    np.testing.assert_allclose(power_sums(M), [0.0, 2.0], atol=1e-15)
    rng = np.random.default_rng(16)
    vals = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    s = np.array([np.sum(vals**k) for k in range(1, 5)])
    back = power_sums_to_eigs(s)
    want = vals[np.lexsort((vals.imag, vals.real))]
    np.testing.assert_allclose(back, want, atol=1e-8)


def test_power_sums_to_eigs_rejects_nonfinite():
    with pytest.raises(RootFindingError):
        power_sums_to_eigs(np.array([np.nan, 1.0]))


def test_lower_shear_field_matches_the_closed_form():
    # d/dt at 0 of the lower shear moves only the diagonal moments, at rate
    # equal to the full spectrum
    c = find_independence_point(3, 1.0, 17)
    num = numeric_field(GEN_E, c)
    ana = analytic_field(GEN_E, c)
    scale = max(1.0, float(np.abs(c.lamhat).max()))
    assert np.abs(num.d_muhat - c.lamhat).max() < 1e-6 * scale
    assert np.abs(ana.d_muhat - c.lamhat).max() == 0.0
    for blk in (num.d_lam, num.d_lamhat, num.d_mu):
        assert np.abs(blk).max() < 1e-6 * scale


def test_scaling_and_upper_shear_trace_components():
    c = find_independence_point(3, 1.0, 18)
    lh, mh = c.lamhat, c.muhat
    s1, s2 = np.sum(mh), np.sum(lh * mh)

    # scaling flow: the full-spectrum power sums grow at rate k s_k
    num_h = numeric_field(GEN_H, c).s_components()
    want_h = {1: np.sum(lh), 2: 2.0 * np.sum(lh**2)}
    for k in (1, 2):
        assert abs(num_h[k] - want_h[k]) < 1e-6 * max(1.0, abs(want_h[k]))

    # upper shear at a slice point (mu = 0): rates are the mixed moments
    num_f = numeric_field(GEN_F, c).s_components()
    want_f = {1: s1, 2: 2.0 * s2}
    for k in (1, 2):
        assert abs(num_f[k] - want_f[k]) < 1e-6 * max(1.0, abs(want_f[k]))
    ana_f = analytic_field(GEN_F, c).s_components()
    for k in (1, 2):
        assert abs(ana_f[k] - want_f[k]) == 0.0


def test_independence_certificate():
    for n in (1, 2, 3):
        c = find_independence_point(n, 1.0, 100 + n)
        # the point really sits on the embedded slice
        p = from_chart(c)
        tr_dev, corner = slice_residual(p)
        assert abs(tr_dev) < 1e-8 * pair_scale(p)
        assert abs(corner) < 1e-8 * pair_scale(p)
        rank, ratio = independence_rank(c)
        assert rank == 3
        assert ratio > 1e-6


def test_fields_are_tangent_to_the_slice():
    c = find_independence_point(2, 1.0, 19)
    for gen in (GEN_E, GEN_F, GEN_H):
        tr_rate, corner_rate = slice_tangency(gen, c)
        assert abs(tr_rate) < 1e-7
        assert abs(corner_rate) < 1e-7


def test_random_sl2_is_unimodular():
    for seed in range(20):
        g = random_sl2(seed)
        det = g.a * g.d - g.b * g.c
        assert abs(det - 1.0) <= 1e-12


def test_chart_survives_the_action():
    # acting, renormalizing, and reading coordinates keeps the pair on the
    # level set and the full spectrum consistent with the trace
    from cmspaces.canonical import normalize
    from cmspaces.variety import on_level

    r = random_point(3, 2, 1.0, 23)
    g = random_sl2(24)
    p = act_pair(g, augment(r))
    nf, _ = normalize(p)
    c = to_chart(nf)
    assert abs(np.sum(c.lamhat) - np.trace(nf.A)) < 1e-9 * pair_scale(p)
    assert on_level(from_chart(c), tol=1e-8)
