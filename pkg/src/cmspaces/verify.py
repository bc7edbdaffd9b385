"""Self-check suites with machine-readable reports.

Each check draws its own seeded inputs, measures a residual, normalizes by
the scale stated in its note, and passes iff residual <= threshold.  Checks
that must EXCEED a floor are phrased as margins (residual = floor - observed,
threshold 0) so the pass rule stays uniform.  A check that raises is recorded
with status "error" and the failing operation named; callers map that to a
distinct exit code.  Records sort by name before emission and reports are
deterministic for a fixed config (runtime_ms aside).
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from .canonical import normalize, orbit_dimension
from .chart import (
    ChartPoint,
    chart_jacobian,
    decompose,
    from_chart,
    random_chart_point,
    to_chart,
)
from .errors import CMSpacesError
from .flowcalc import (
    BRACKET_SIGN,
    bracket_flow,
    bracket_target,
    compatible_witness,
    detect_bracket_sign,
    lnd_degree,
    pair_distance,
    trotter_flow,
    trotter_target,
)
from .linalg import eig, frob, match_to_reference, numeric_rank, solve
from .sl2 import (
    GEN_E,
    GEN_F,
    GEN_H,
    act_components,
    act_pair,
    analytic_field,
    find_independence_point,
    fixed_point_probe,
    independence_rank,
    numeric_field,
    random_sl2,
    slice_tangency,
)
from .variety import (
    AugmentedPair,
    augment,
    block_commutator_residual,
    calibrate_dictionary,
    fingerprint,
    gauge_act,
    level_residual,
    level_scale,
    pair_fingerprint,
    pair_scale,
    project,
    random_gauge,
    random_point,
    random_quadruple,
    spaced_points,
)

SCHEMA_VERSION = "cmspaces-report/1"

SUITE_NAMES = ("linalg", "variety", "canonical", "chart", "sl2", "flowcalc", "quiver")

# Composition times for the flow checks.  The commutator-square error is
# ~ sinh(t) sqrt(t/steps) (measured and hand-derived from the 2x2 closed
# form), so BRACKET_TIME = 0.01 puts 1024 squares near 1e-4 relative, an
# order under the 1e-3 threshold; larger times (0.25) sit far above it.
TROTTER_TIME = 0.5
TROTTER_STEPS = (16, 64, 256)
BRACKET_TIME = 0.01
BRACKET_STEPS = (64, 256, 1024)


@dataclass(frozen=True)
class RunConfig:
    """Parameters shared by the suites; None fields fall back per check."""

    n_values: tuple | None = None
    k_values: tuple = (1, 2)
    tau: complex = 1.0
    seed: int = 1
    tol: float = 1e-9
    trials: int | None = None
    suites: tuple = ("all",)

    def to_dict(self) -> dict:
        return {
            "n_values": list(self.n_values) if self.n_values else None,
            "k_values": list(self.k_values),
            "tau": [complex(self.tau).real, complex(self.tau).imag],
            "seed": self.seed,
            "tol": self.tol,
            "trials": self.trials,
            "suites": list(self.suites),
        }


@dataclass(frozen=True)
class CheckRecord:
    name: str
    law: str
    status: str
    residual: float
    threshold: float
    runtime_ms: float
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "law": self.law,
            "status": self.status,
            "residual": self.residual,
            "threshold": self.threshold,
            "runtime_ms": round(self.runtime_ms, 3),
            "note": self.note,
        }


def _seed(cfg: RunConfig, tag: str, i: int = 0) -> int:
    return cfg.seed * 10_000_000 + zlib.crc32(tag.encode()) % 1_000_000 + 1000 * i


def _ns(cfg: RunConfig, pinned_max: int) -> list:
    if cfg.n_values:
        return [n for n in cfg.n_values if 1 <= n <= pinned_max]
    return list(range(1, pinned_max + 1))


def _trials(cfg: RunConfig, pinned: int) -> int:
    return cfg.trials if cfg.trials else pinned


def _finish(name: str, law: str, residual: float, threshold: float,
            t0: float, note: str = "") -> CheckRecord:
    status = "pass" if residual <= threshold else "fail"
    return CheckRecord(name, law, status, float(residual), float(threshold),
                       (perf_counter() - t0) * 1000.0, note)


# ---------------------------------------------------------------------------
# linalg


def _check_eig_reassembly(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for size in range(2, 7):
        for i in range(8):
            rng = np.random.default_rng(_seed(cfg, f"eig{size}", i))
            M = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
            vals, g = eig(M, cfg.tol)
            resid = frob(g @ M @ np.linalg.inv(g) - np.diag(vals)) / max(1.0, frob(M))
            worst = max(worst, resid)
    return _finish("linalg.eig_reassembly", "spectral-factorization-residual",
                   worst, 1e-12, t0, "relative to max(1, ||M||)")


def _check_solve(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for size in range(2, 7):
        rng = np.random.default_rng(_seed(cfg, f"solve{size}"))
        M = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        M = M + 1.5 * np.eye(size)
        b = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        x = solve(M, b, cfg.tol)
        worst = max(worst, float(np.linalg.norm(M @ x - b) / np.linalg.norm(b)))
    return _finish("linalg.solve_residual", "linear-solve-residual",
                   worst, 1e-12, t0, "relative to ||b||")


def _check_matching(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    mismatches = 0
    for i in range(20):
        rng = np.random.default_rng(_seed(cfg, "match", i))
        ref = spaced_points(rng, 5)
        perm = rng.permutation(5)
        noisy = ref[perm] + 1e-8 * (rng.standard_normal(5) + 1j * rng.standard_normal(5))
        found = match_to_reference(noisy, ref)
        if not np.array_equal(found, np.argsort(perm)):
            mismatches += 1
    return _finish("linalg.match_permutation", "nearest-neighbor-tracking",
                   float(mismatches), 0.0, t0, "count of unrecovered permutations")


def _suite_linalg(cfg: RunConfig) -> list:
    return [_check_eig_reassembly(cfg), _check_solve(cfg), _check_matching(cfg)]


# ---------------------------------------------------------------------------
# variety


def _check_level_condition(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    trials = _trials(cfg, 50)
    for n in _ns(cfg, 6):
        for k in cfg.k_values:
            for i in range(trials):
                r = random_point(n, k, cfg.tau, _seed(cfg, f"lvl{n}{k}", i))
                worst = max(worst, level_residual(r) / level_scale(r))
    return _finish("variety.level_condition", "seeded-points-on-level-set",
                   worst, 1e-12, t0, "relative to max(1, ||A|| ||B||)")


def _check_block_identity(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    count = _trials(cfg, 200)
    for i in range(count):
        n = 1 + i % 6
        r = random_quadruple(n, 2, cfg.tau, _seed(cfg, "blk", i))
        worst = max(worst, block_commutator_residual(r) / level_scale(r))
    return _finish("variety.block_identity", "pair-commutator-block-forms",
                   worst, 1e-12, t0, "relative to max(1, ||A|| ||B||)")


def _check_augment_roundtrip(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(20):
        n = 1 + i % 5
        r = random_quadruple(n, 2, cfg.tau, _seed(cfg, "aug", i))
        back = project(augment(r))
        worst = max(
            worst,
            float(np.abs(back.A - r.A).max()),
            float(np.abs(back.B - r.B).max()),
            float(np.abs(back.v - r.v).max()),
            float(np.abs(back.w - r.w).max()),
        )
    return _finish("variety.augment_project_roundtrip", "border-embedding-inverse",
                   worst, 0.0, t0, "bitwise round trip")


def _check_fingerprint_invariance(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(20):
        n = 2 + i % 4
        r = random_point(n, 2, cfg.tau, _seed(cfg, "fpg", i))
        g = random_gauge(n, _seed(cfg, "fpgg", i))
        fp0 = fingerprint(r)
        fp1 = fingerprint(gauge_act(g, r))
        worst = max(worst, float(np.abs(fp1 - fp0).max() / max(1.0, np.abs(fp0).max())))
    return _finish("variety.fingerprint_gauge_invariance", "trace-words-basechange-invariant",
                   worst, 1e-9, t0, "relative to max(1, |fingerprint|)")


def _suite_variety(cfg: RunConfig) -> list:
    return [
        _check_level_condition(cfg),
        _check_block_identity(cfg),
        _check_augment_roundtrip(cfg),
        _check_fingerprint_invariance(cfg),
    ]


# ---------------------------------------------------------------------------
# canonical


def _normalized_point(cfg: RunConfig, n: int, tag: str, i: int):
    r = random_point(n, 2, cfg.tau, _seed(cfg, tag, i))
    p = augment(r)
    nf, g = normalize(p, cfg.tol)
    return p, nf, g


def _check_normal_form_shape(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(20):
        n = 1 + i % 5
        _, nf, _ = _normalized_point(cfg, n, "nf", i)
        block = nf.A[:n, :n]
        off = block - np.diag(np.diag(block))
        worst = max(
            worst,
            float(np.abs(off).max()),
            float(np.abs(nf.A[n, :n] - 1.0).max()),
        )
    return _finish("canonical.normal_form_shape", "diagonal-block-unit-border-row",
                   worst, 0.0, t0, "exact after snapping")


def _check_normalize_equivalence(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(20):
        n = 1 + i % 5
        p, nf, _ = _normalized_point(cfg, n, "nfe", i)
        fp0 = pair_fingerprint(p)
        fp1 = pair_fingerprint(nf)
        worst = max(worst, float(np.abs(fp1 - fp0).max() / max(1.0, np.abs(fp0).max())))
    return _finish("canonical.normalize_gauge_equivalence", "normal-form-on-same-orbit",
                   worst, 1e-8, t0, "relative trace-word deviation")


def _check_orbit_rank(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    deficiency = 0
    for i in range(15):
        n = 1 + i % 5
        r = random_point(n, 2, cfg.tau, _seed(cfg, "orb", i))
        dim = orbit_dimension(augment(r), cfg.tol)
        deficiency = max(deficiency, abs(dim - n * n))
    return _finish("canonical.orbit_rank_regular", "free-basechange-orbit-dimension",
                   float(deficiency), 0.0, t0, "deviation from n^2")


def _check_normalize_idempotent(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(10):
        n = 1 + i % 5
        _, nf, _ = _normalized_point(cfg, n, "nfi", i)
        nf2, _ = normalize(nf, cfg.tol)
        worst = max(worst, frob(nf2.A - nf.A), frob(nf2.B - nf.B))
    return _finish("canonical.normalize_idempotent", "normal-form-fixed-point",
                   worst, 1e-12, t0, "absolute matrix deviation")


def _suite_canonical(cfg: RunConfig) -> list:
    return [
        _check_normal_form_shape(cfg),
        _check_normalize_equivalence(cfg),
        _check_orbit_rank(cfg),
        _check_normalize_idempotent(cfg),
    ]


# ---------------------------------------------------------------------------
# chart


def _check_hand_case(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    A = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    B = np.array([[0.0, -0.5], [0.5, 0.0]], dtype=np.complex128)
    p = AugmentedPair(A, B, 1.0)
    d = decompose(p, cfg.tol, lamhat_ref=np.array([1.0, -1.0]))
    S_want = np.array([[0.0, 0.5], [-0.5, 0.0]], dtype=np.complex128)
    resid = max(
        float(np.abs(d.mu).max()),
        float(np.abs(d.defect).max()),
        float(np.abs(d.S - S_want).max()),
        float(np.abs(d.muhat).max()),
    )
    return _finish("chart.splitting_hand_case", "one-site-splitting-closed-form",
                   resid, 1e-12, t0, "absolute deviation from hand values")


def _check_splitting_constraints(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(20):
        n = 1 + i % 5
        c = random_chart_point(n, cfg.tau, _seed(cfg, "spl", i))
        p = from_chart(c, cfg.tol)
        d = decompose(p, cfg.tol)
        scale = pair_scale(p)
        ginv = np.linalg.inv(d.g)
        worst = max(
            worst,
            frob(d.N1 + d.N2 - p.B) / scale,
            frob(d.g @ d.N2 @ ginv - np.diag(d.muhat) - d.S) / scale,
        )
    return _finish("chart.splitting_constraints", "second-matrix-splitting",
                   worst, 1e-9, t0, "relative to max(1, ||A|| ||B||)")


def _check_gap_term_invariance(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for n in _ns(cfg, 4):
        base = random_chart_point(n, cfg.tau, _seed(cfg, f"gapi{n}"))
        S_ref = None
        rng = np.random.default_rng(_seed(cfg, f"gapv{n}"))
        for _ in range(20):
            mu = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
            muhat = rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1)
            c = ChartPoint(base.lam, base.lamhat, mu, muhat, cfg.tau)
            d = decompose(from_chart(c, cfg.tol), cfg.tol, lamhat_ref=base.lamhat)
            if S_ref is None:
                S_ref = d.S
            else:
                worst = max(worst, float(np.abs(d.S - S_ref).max()))
    return _finish("chart.gap_term_spectral_only", "gap-term-depends-on-spectra-only",
                   worst, 1e-10, t0, "absolute deviation across moment variations")


def _check_round_trip_coordinates(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    trials = _trials(cfg, 20)
    for n in _ns(cfg, 5):
        for i in range(trials):
            c = random_chart_point(n, cfg.tau, _seed(cfg, f"rtc{n}", i))
            back = to_chart(from_chart(c, cfg.tol), cfg.tol)
            dev = np.abs(back.vector() - c.vector()).max()
            worst = max(worst, float(dev / max(1.0, np.abs(c.vector()).max())))
    return _finish("chart.round_trip_coordinates", "chart-inverse-composition-identity",
                   worst, 1e-8, t0, "relative to max(1, |coords|)")


def _check_round_trip_pair(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    trials = _trials(cfg, 20)
    for n in _ns(cfg, 5):
        for i in range(trials):
            r = random_point(n, 2, cfg.tau, _seed(cfg, f"rtp{n}", i))
            p, _ = normalize(augment(r), cfg.tol)
            q = from_chart(to_chart(p, cfg.tol), cfg.tol)
            fp0 = pair_fingerprint(p)
            fp1 = pair_fingerprint(q)
            worst = max(worst, float(np.abs(fp1 - fp0).max() / max(1.0, np.abs(fp0).max())))
    return _finish("chart.round_trip_pair", "rebuilt-pair-on-same-orbit",
                   worst, 1e-8, t0, "relative trace-word deviation")


def _check_jacobian_rank(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    deficiency = 0
    trials = _trials(cfg, 20)
    for n in _ns(cfg, 5):
        for i in range(trials):
            c = random_chart_point(n, cfg.tau, _seed(cfg, f"jac{n}", i))
            J = chart_jacobian(c, cfg.tol)
            deficiency = max(deficiency, abs(numeric_rank(J) - (4 * n + 2)))
    return _finish("chart.jacobian_rank", "chart-coordinate-count",
                   float(deficiency), 0.0, t0, "deviation from 4n+2")


def _suite_chart(cfg: RunConfig) -> list:
    return [
        _check_hand_case(cfg),
        _check_splitting_constraints(cfg),
        _check_gap_term_invariance(cfg),
        _check_round_trip_coordinates(cfg),
        _check_round_trip_pair(cfg),
        _check_jacobian_rank(cfg),
    ]


# ---------------------------------------------------------------------------
# sl2


def _check_equivariance(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(20):
        n = 1 + i % 5
        r = random_quadruple(n, 2, cfg.tau, _seed(cfg, "eqv", i))
        g = random_sl2(_seed(cfg, "eqvg", i))
        via_components = augment(act_components(g, r))
        via_pair = act_pair(g, augment(r))
        worst = max(
            worst,
            float(np.abs(via_components.A - via_pair.A).max()),
            float(np.abs(via_components.B - via_pair.B).max()),
        )
    return _finish("sl2.equivariance_exact", "augmentation-intertwines-action",
                   worst, 0.0, t0, "bitwise agreement of the two routes")


def _check_moment_preservation(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    trials = _trials(cfg, 100)
    for i in range(trials):
        n = 1 + i % 5
        r = random_point(n, 2, cfg.tau, _seed(cfg, "mom", i))
        g = random_sl2(_seed(cfg, "momg", i))
        out = act_components(g, r)
        worst = max(worst, level_residual(out) / level_scale(out))
    return _finish("sl2.moment_preservation", "unit-determinant-preserves-level",
                   worst, 1e-10, t0, "relative to max(1, ||A|| ||B||)")


def _check_negative_control(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    bad = np.array([[2.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
    smallest = np.inf
    for i in range(10):
        n = 1 + i % 5
        r = random_point(n, 2, cfg.tau, _seed(cfg, "neg", i))
        out = act_components(bad, r)
        smallest = min(smallest, level_residual(out) / level_scale(out))
    return _finish("sl2.determinant_control_margin", "non-unimodular-breaks-level",
                   1e-3 - smallest, 0.0, t0,
                   "margin: smallest residual must exceed 1e-3; negative passes")


def _check_scaling_probe(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    smallest = np.inf
    count = _trials(cfg, 50)
    for i in range(count):
        n = 1 + i % 5
        seed = _seed(cfg, "prb", i)
        for bump in range(10):
            r = random_point(n, 2, cfg.tau, seed + 31 * bump)
            if abs(np.trace(r.A @ r.A)) > 1e-3 * max(1.0, frob(r.A) ** 2):
                break
        before, _, sep = fixed_point_probe(r, 1.0)
        smallest = min(smallest, sep / max(1.0, float(np.abs(before).max())))
    return _finish("sl2.scaling_probe_margin", "scaling-action-moves-invariants",
                   1e-6 - smallest, 0.0, t0,
                   "margin: smallest separation must exceed 1e-6; negative passes")


def _independence_points(cfg: RunConfig) -> dict:
    points = {}
    for n in _ns(cfg, 5):
        points[n] = find_independence_point(n, cfg.tau, _seed(cfg, f"ind{n}"), cfg.tol)
    return points


def _check_independence(cfg: RunConfig, points: dict) -> list:
    t0 = perf_counter()
    deficiency = 0
    min_ratio = np.inf
    for c in points.values():
        rank, ratio = independence_rank(c, cfg.tol)
        deficiency = max(deficiency, 3 - rank)
        min_ratio = min(min_ratio, ratio)
    rec1 = _finish("sl2.independence_rank", "three-fields-independent",
                   float(deficiency), 0.0, t0, "rank deficiency below 3")
    rec2 = _finish("sl2.independence_ratio_margin", "three-fields-independent",
                   1e-6 - min_ratio, 0.0, t0,
                   "margin: smallest/largest singular value must exceed 1e-6")
    return [rec1, rec2]


def _check_lower_shear_match(cfg: RunConfig, points: dict) -> list:
    t0 = perf_counter()
    worst_full = 0.0
    worst_frozen = 0.0
    for c in points.values():
        num = numeric_field(GEN_E, c, cfg.tol)
        ana = analytic_field(GEN_E, c)
        scale = max(1.0, float(np.abs(c.lamhat).max()))
        worst_full = max(
            worst_full,
            float(np.abs(num.vector() - ana.vector()).max()) / scale,
        )
        frozen = max(
            float(np.abs(num.d_lam).max()),
            float(np.abs(num.d_lamhat).max()),
            float(np.abs(num.d_mu).max()),
        )
        worst_frozen = max(worst_frozen, frozen / scale)
    rec1 = _finish("sl2.lower_shear_field_match", "shear-field-closed-form",
                   worst_full, 1e-6, t0, "relative to max(1, |spectrum|)")
    rec2 = _finish("sl2.lower_shear_invariance", "shear-fixes-spectra-and-row-moments",
                   worst_frozen, 1e-7, t0, "relative to max(1, |spectrum|)")
    return [rec1, rec2]


def _check_trace_components(cfg: RunConfig, points: dict) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for c in points.values():
        for gen in (GEN_F, GEN_H):
            num = numeric_field(gen, c, cfg.tol)
            ana = analytic_field(gen, c).d_s
            got = num.s_components(2)
            scale = max(1.0, *(abs(v) for v in ana.values()))
            worst = max(
                worst,
                max(abs(got[k] - ana[k]) for k in (1, 2)) / scale,
            )
    return _finish("sl2.trace_component_match", "scaling-and-upper-shear-trace-rates",
                   worst, 1e-6, t0, "relative to max(1, |component|)")


def _check_slice_tangency(cfg: RunConfig, points: dict) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for c in points.values():
        scale = pair_scale(from_chart(c, cfg.tol))
        for gen in (GEN_E, GEN_F, GEN_H):
            r1, r2 = slice_tangency(gen, c, cfg.tol)
            worst = max(worst, max(r1, r2) / scale)
    return _finish("sl2.slice_tangency", "fields-tangent-to-embedded-slice",
                   worst, 1e-7, t0, "relative to max(1, ||A|| ||B||)")


def _check_scaling_spectra(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    for i in range(5):
        n = 1 + i % 3
        c = random_chart_point(n, cfg.tau, _seed(cfg, "hsc", i))
        p = from_chart(c, cfg.tol)
        q = act_pair(GEN_H.exp(0.1), p)
        factor = np.exp(0.1)
        vals_q, _ = eig(q.A, cfg.tol)
        want = factor * c.lamhat
        perm = match_to_reference(vals_q, want)
        worst = max(worst, float(np.abs(vals_q[perm] - want).max()))
        block_q = q.A[:n, :n]
        if n > 1:
            vals_b, _ = eig(block_q, cfg.tol)
            want_b = factor * c.lam
            perm_b = match_to_reference(vals_b, want_b)
            worst = max(worst, float(np.abs(vals_b[perm_b] - want_b).max()))
        else:
            worst = max(worst, float(abs(block_q[0, 0] - factor * c.lam[0])))
    return _finish("sl2.scaling_spectra", "joint-exponential-scaling-of-spectra",
                   worst, 1e-9, t0, "absolute eigenvalue deviation at t=0.1")


def _suite_sl2(cfg: RunConfig) -> list:
    records = [
        _check_equivariance(cfg),
        _check_moment_preservation(cfg),
        _check_negative_control(cfg),
        _check_scaling_probe(cfg),
    ]
    points = _independence_points(cfg)
    records.extend(_check_independence(cfg, points))
    records.extend(_check_lower_shear_match(cfg, points))
    records.append(_check_trace_components(cfg, points))
    records.append(_check_slice_tangency(cfg, points))
    records.append(_check_scaling_spectra(cfg))
    return records


# ---------------------------------------------------------------------------
# flowcalc


def _flow_base_points(cfg: RunConfig, tag: str) -> list:
    points = []
    for n in _ns(cfg, 3):
        for i in range(5):
            c = random_chart_point(n, cfg.tau, _seed(cfg, f"{tag}{n}", i))
            points.append(from_chart(c, cfg.tol))
    return points


def _fp_error(p, q) -> float:
    fp0 = pair_fingerprint(q)
    fp1 = pair_fingerprint(p)
    return float(np.abs(fp1 - fp0).max() / max(1.0, np.abs(fp0).max()))


def _check_trotter_rate(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    slopes = []
    for p in _flow_base_points(cfg, "tro"):
        target = trotter_target(GEN_E, GEN_F, TROTTER_TIME, p)
        errs = [
            max(_fp_error(trotter_flow(GEN_E, GEN_F, TROTTER_TIME, m, p), target), 1e-300)
            for m in TROTTER_STEPS
        ]
        coef = np.polyfit(np.log(TROTTER_STEPS), np.log(errs), 1)
        slope = -float(coef[0])
        slopes.append(slope)
        worst = max(worst, abs(slope - 1.0))
    note = "order in 1/steps; measured slopes " + ", ".join(f"{s:.3f}" for s in slopes)
    return _finish("flowcalc.trotter_rate", "split-composition-first-order",
                   worst, 0.3, t0, note)


def _check_bracket_limit(cfg: RunConfig) -> list:
    t0 = perf_counter()
    worst_final = 0.0
    worst_increase = -np.inf
    for p in _flow_base_points(cfg, "brk"):
        target = bracket_target(GEN_E, GEN_F, BRACKET_TIME, p)
        errs = [
            _fp_error(bracket_flow(GEN_E, GEN_F, BRACKET_TIME, m, p), target)
            for m in BRACKET_STEPS
        ]
        worst_final = max(worst_final, errs[-1])
        worst_increase = max(
            worst_increase, max(b - a for a, b in zip(errs, errs[1:]))
        )
    rec1 = _finish("flowcalc.bracket_final_error", "commutator-composition-limit",
                   worst_final, 1e-3, t0,
                   f"relative trace-word error at {BRACKET_STEPS[-1]} squares, t={BRACKET_TIME}")
    rec2 = _finish("flowcalc.bracket_monotone", "commutator-composition-limit",
                   worst_increase, 0.0, t0,
                   "largest error increase across the step ladder; negative passes")
    return [rec1, rec2]


def _check_bracket_sign(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    mismatches = 0
    for p in _flow_base_points(cfg, "sgn")[:5]:
        if detect_bracket_sign(0.2, 256, p) != -BRACKET_SIGN:
            mismatches += 1
    return _finish("flowcalc.bracket_sign_consistency", "global-bracket-sign",
                   float(mismatches), 0.0, t0,
                   "commutator flow lands on minus the matrix bracket at every point")


def _check_commuting_cases(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    c = random_chart_point(2, cfg.tau, _seed(cfg, "comm"))
    p = from_chart(c, cfg.tol)
    scale = pair_scale(p)
    same_trotter = pair_distance(
        trotter_flow(GEN_E, GEN_E, 0.3, 64, p),
        trotter_target(GEN_E, GEN_E, 0.3, p),
    )
    same_bracket = pair_distance(bracket_flow(GEN_E, GEN_E, 0.3, 64, p), p)
    resid = max(same_trotter, same_bracket) / scale
    return _finish("flowcalc.commuting_generators", "commuting-flows-compose-exactly",
                   resid, 1e-12, t0, "relative to max(1, ||A|| ||B||)")


def _check_shear_degrees(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    c = random_chart_point(2, cfg.tau, _seed(cfg, "lnd"))
    p = from_chart(c, cfg.tol)
    cases = (
        ("trace_first", 0),
        ("trace_second", 1),
        ("trace_second_sq", 2),
    )
    total = 0
    for obs, want in cases:
        got = lnd_degree("e", obs, p)
        total += 99 if got is None else abs(got - want)
    return _finish("flowcalc.shear_pullback_degrees", "unipotent-flows-polynomial",
                   float(total), 0.0, t0, "sum of degree deviations over hand cases")


def _check_witness(cfg: RunConfig) -> CheckRecord:
    t0 = perf_counter()
    worst = 0.0
    count = _trials(cfg, 20)
    for i in range(count):
        n = 1 + i % 4
        seed = _seed(cfg, "wit", i)
        for bump in range(10):
            c = random_chart_point(n, cfg.tau, seed + 31 * bump)
            p = from_chart(c, cfg.tol)
            if abs(np.trace(p.A)) > 0.1:
                break
        report = compatible_witness(p)
        worst = max(worst, report.residual / report.scale)
    return _finish("flowcalc.witness_triple", "trace-witness-derivative-identities",
                   worst, 1e-10, t0, "relative to max(1, ||A||, ||B||)")


def _suite_flowcalc(cfg: RunConfig) -> list:
    records = [_check_trotter_rate(cfg)]
    records.extend(_check_bracket_limit(cfg))
    records.append(_check_bracket_sign(cfg))
    records.append(_check_commuting_cases(cfg))
    records.append(_check_shear_degrees(cfg))
    records.append(_check_witness(cfg))
    return records


# ---------------------------------------------------------------------------
# quiver


def _suite_quiver(cfg: RunConfig) -> list:
    t0 = perf_counter()
    count = _trials(cfg, 20)
    label_sets = []
    literal_flags = []
    for i in range(count):
        n = 1 + i % 4
        r = random_point(n, 2, cfg.tau, _seed(cfg, "qvr", i))
        report = calibrate_dictionary(r)
        label_sets.append(tuple(sorted(v.label() for v in report.admissible)))
        literal_flags.append(report.literal_admissible)
    disagreements = sum(1 for s in label_sets if s != label_sets[0])
    note = f"admissible: {list(label_sets[0])}; literal admissible: {literal_flags[0]}"
    rec1 = _finish("quiver.dictionary_consistency", "admissible-conventions-point-independent",
                   float(disagreements), 0.0, t0, note)
    rec2 = _finish("quiver.literal_dictionary_recorded", "printed-dictionary-membership",
                   0.0, 0.0, perf_counter(),
                   f"literal admissible: {all(literal_flags)}")
    return [rec1, rec2]


# ---------------------------------------------------------------------------
# assembly


_SUITE_RUNNERS = {
    "linalg": _suite_linalg,
    "variety": _suite_variety,
    "canonical": _suite_canonical,
    "chart": _suite_chart,
    "sl2": _suite_sl2,
    "flowcalc": _suite_flowcalc,
    "quiver": _suite_quiver,
}


def expand_suites(names) -> list:
    out = []
    for name in names:
        if name == "all":
            out.extend(SUITE_NAMES)
        elif name in SUITE_NAMES:
            out.append(name)
        else:
            raise ValueError(f"unknown suite {name!r}")
    seen = set()
    ordered = []
    for name in out:
        if name not in seen:
            seen.add(name)
            ordered.append(name)
    return ordered


def run(cfg: RunConfig) -> dict:
    """Run the selected suites and assemble the report dictionary.

    A check that raises a package error is recorded with status "error"
    rather than aborting the whole report.
    """
    records = []
    for name in expand_suites(cfg.suites):
        runner = _SUITE_RUNNERS[name]
        try:
            records.extend(runner(cfg))
        except CMSpacesError as exc:
            records.append(CheckRecord(
                name=f"{name}.internal",
                law="suite-execution",
                status="error",
                residual=float("inf"),
                threshold=0.0,
                runtime_ms=0.0,
                note=f"{type(exc).__name__}: {exc}",
            ))
    records.sort(key=lambda r: r.name)
    passed = sum(1 for r in records if r.status == "pass")
    failed = sum(1 for r in records if r.status == "fail")
    errored = sum(1 for r in records if r.status == "error")
    return {
        "schema": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "records": [r.to_dict() for r in records],
        "summary": {
            "total": len(records),
            "passed": passed,
            "failed": failed,
            "errors": errored,
        },
    }
