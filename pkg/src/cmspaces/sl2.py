"""The linear SL2 action on augmented pairs and its induced vector fields.

An element ((a, b), (c, d)) with a d - b c = 1 acts on a pair by

    (M, N) -> (a M + b N, c M + d N),

which preserves the level condition (the pair commutator picks up the
factor a d - b c).  On quadruples the same action reads

    (A, B)   -> (a A + b B, c A + d B)
    (v1, v2) -> (a v1 + b v2, c v1 + d v2)
    (w1, w2) -> (d w1 - c w2, -b w1 + a w2)

and commutes with augmentation entry for entry.  Three one-parameter
subgroups generate the action: the lower shear (1, 0; t, 1) adds t M to N,
the upper shear (1, t; 0, 1) adds t N to M, and the diagonal subgroup
scales the pair by (e^t, e^-t).  Their induced vector fields are computed
here both numerically (finite differences of tracked chart coordinates)
and from the closed-form components the shear and scaling actions admit.
"""

from __future__ import annotations

from cmath import cosh, exp, sinh, sqrt
from dataclasses import dataclass

import numpy as np

from .errors import (
    RootFindingError,
    SearchExhaustedError,
    ShapeMismatchError,
    ZeroPairError,
)
from .chart import (
    ChartPoint,
    from_chart,
    project_to_slice,
    slice_residual,
    to_chart_tracked,
)
from .linalg import DEFAULT_TOL, frob, min_gap
from .variety import (
    AugmentedPair,
    Representation,
    fingerprint,
    level_residual,
    spaced_points,
)

# ---------------------------------------------------------------------------
# group elements and generators


@dataclass(frozen=True)
class SL2Element:
    """2 x 2 complex matrix with unit determinant (checked to 1e-12)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise ShapeMismatchError(f"determinant {det} is not 1")

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    @classmethod
    def from_matrix(cls, M) -> "SL2Element":
        M = np.asarray(M, dtype=np.complex128)
        if M.shape != (2, 2):
            raise ShapeMismatchError(f"expected a 2 x 2 matrix, got {M.shape}")
        return cls(M[0, 0], M[0, 1], M[1, 0], M[1, 1])

    def compose(self, other: "SL2Element") -> "SL2Element":
        return SL2Element.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> "SL2Element":
        return SL2Element(self.d, -self.b, -self.c, self.a)


@dataclass(frozen=True)
class SL2Generator:
    """Scaled basis generator of the action.

    kind 'e' is the lower-left nilpotent (exponential is the lower shear),
    'f' the upper-right nilpotent (upper shear), 'h' the diagonal generator
    (exponential is the scaling subgroup).  All exponentials are closed
    form; nothing is integrated.
    """

    kind: str
    coeff: complex = 1.0

    def __post_init__(self):
        if self.kind not in ("e", "f", "h"):
            raise ShapeMismatchError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "coeff", complex(self.coeff))

    def matrix(self) -> np.ndarray:
        base = {
            "e": np.array([[0.0, 0.0], [1.0, 0.0]]),
            "f": np.array([[0.0, 1.0], [0.0, 0.0]]),
            "h": np.array([[1.0, 0.0], [0.0, -1.0]]),
        }[self.kind]
        return self.coeff * base.astype(np.complex128)

    def exp(self, t: complex) -> SL2Element:
        z = self.coeff * complex(t)
        if self.kind == "e":
            return SL2Element(1.0, 0.0, z, 1.0)
        if self.kind == "f":
            return SL2Element(1.0, z, 0.0, 1.0)
        return SL2Element(exp(z), 0.0, 0.0, exp(-z))


GEN_E = SL2Generator("e")
GEN_F = SL2Generator("f")
GEN_H = SL2Generator("h")


def sl2_exp(X) -> SL2Element:
    """Closed-form exponential of a traceless 2 x 2 matrix.

    For X = ((p, q), (r, -p)) with delta = p^2 + q r,
    exp(X) = cosh(s) I + (sinh(s)/s) X at s = sqrt(delta); the quotient is
    evaluated by series near s = 0.
    """
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (2, 2):
        raise ShapeMismatchError(f"expected a 2 x 2 matrix, got {X.shape}")
    if abs(X[0, 0] + X[1, 1]) > 1e-12 * max(1.0, frob(X)):
        raise ShapeMismatchError("generator must be traceless")
    delta = complex(X[0, 0] ** 2 + X[0, 1] * X[1, 0])
    s = sqrt(delta)
    if abs(s) < 1e-6:
        ch = 1.0 + delta / 2.0 + delta**2 / 24.0
        ratio = 1.0 + delta / 6.0 + delta**2 / 120.0
    else:
        ch = cosh(s)
        ratio = sinh(s) / s
    return SL2Element.from_matrix(ch * np.eye(2) + ratio * X)


def _coeffs(g) -> tuple:
    if isinstance(g, SL2Element):
        return g.a, g.b, g.c, g.d
    M = np.asarray(g, dtype=np.complex128)
    if M.shape != (2, 2):
        raise ShapeMismatchError(f"expected SL2Element or 2 x 2 matrix, got {M.shape}")
    return M[0, 0], M[0, 1], M[1, 0], M[1, 1]


# ---------------------------------------------------------------------------
# the action


def act_pair(g, p: AugmentedPair) -> AugmentedPair:
    """(M, N) -> (a M + b N, c M + d N); accepts any 2 x 2 array as well.

    The carried level parameter is unchanged: unit-determinant elements
    preserve the level set.
    """
    a, b, c, d = _coeffs(g)
    return AugmentedPair(a * p.A + b * p.B, c * p.A + d * p.B, p.tau)


def act_components(g, r: Representation) -> Representation:
    """Component form of the action on k = 2 quadruples.

    Matches act_pair through augmentation entry for entry (same floating
    point operations on both routes).
    """
    if r.k != 2:
        raise ShapeMismatchError("the SL2 action needs k = 2")
    a, b, c, d = _coeffs(g)
    v1, v2 = r.v[:, 0], r.v[:, 1]
    w1, w2 = r.w[0, :], r.w[1, :]
    return Representation(
        a * r.A + b * r.B,
        c * r.A + d * r.B,
        np.column_stack([a * v1 + b * v2, c * v1 + d * v2]),
        np.vstack([d * w1 - c * w2, -b * w1 + a * w2]),
        r.tau,
    )


def level_residual_after(g, r: Representation) -> float:
    """Level residual of the transformed quadruple; zero for true SL2 elements."""
    return level_residual(act_components(g, r))


def fixed_point_probe(r: Representation, t: float):
    """Fingerprints before and after the scaling subgroup at time t.

    Returns (before, after, separation) with separation the largest
    absolute fingerprint difference.  Pure trace powers make the probe
    sensitive: tr A^m picks up the factor e^{m t}.  Requires a nonzero
    matrix pair and nonzero time.
    """
    if t == 0:
        raise ValueError("probe time must be nonzero")
    if frob(r.A) + frob(r.B) == 0.0:
        raise ZeroPairError("the probe needs a nonzero matrix pair")
    h = GEN_H.exp(t)
    before = fingerprint(r)
    after = fingerprint(act_components(h, r))
    return before, after, float(np.abs(before - after).max())


# ---------------------------------------------------------------------------
# power-sum coordinates


def power_sums(M, kmax: int | None = None) -> np.ndarray:
    """s_k = tr M^k for k = 1 .. kmax (default: the matrix size)."""
    M = np.asarray(M, dtype=np.complex128)
    kmax = M.shape[0] if kmax is None else int(kmax)
    out = np.empty(kmax, dtype=np.complex128)
    P = np.eye(M.shape[0], dtype=np.complex128)
    for k in range(kmax):
        P = P @ M
        out[k] = np.trace(P)
    return out


def eigs_to_power_sums(values, kmax: int | None = None) -> np.ndarray:
    v = np.asarray(values, dtype=np.complex128).ravel()
    kmax = v.size if kmax is None else int(kmax)
    return np.array([np.sum(v**k) for k in range(1, kmax + 1)], dtype=np.complex128)


def power_sums_to_eigs(s, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Invert s_k = sum lam^k via Newton's identities and a companion solve.

    The input must describe a simple spectrum; returns the values in the
    package ordering.  Raises RootFindingError on degenerate input.
    """
    s = np.asarray(s, dtype=np.complex128).ravel()
    if not np.isfinite(s).all():
        raise RootFindingError("power sums contain non-finite entries")
    m = s.size
    e = np.zeros(m + 1, dtype=np.complex128)
    e[0] = 1.0
    for k in range(1, m + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i - 1]
        e[k] = acc / k
    coeffs = np.array([(-1) ** k * e[k] for k in range(m + 1)], dtype=np.complex128)
    roots = np.roots(coeffs)
    if not np.isfinite(roots).all():
        raise RootFindingError("companion solve produced non-finite roots")
    scale = max(1.0, float(np.abs(roots).max()))
    if min_gap(roots) <= tol * scale:
        raise RootFindingError("power sums correspond to a degenerate spectrum")
    return roots[np.lexsort((roots.imag, roots.real))]


# ---------------------------------------------------------------------------
# induced vector fields in chart coordinates


@dataclass(frozen=True)
class ChartTangent:
    """Tangent vector at a chart point.

    Numerically computed fields fill all four coordinate blocks; closed-form
    fields fill only the components the computation determines and leave the
    rest None (never silently zero).  d_s carries power-sum components
    {k: d s_k} when they are the natural closed form.
    """

    base: ChartPoint
    d_lam: np.ndarray | None = None
    d_lamhat: np.ndarray | None = None
    d_mu: np.ndarray | None = None
    d_muhat: np.ndarray | None = None
    d_s: dict | None = None

    def vector(self) -> np.ndarray:
        """Packed (d_lam, d_lamhat, d_mu, d_muhat); requires all blocks."""
        blocks = (self.d_lam, self.d_lamhat, self.d_mu, self.d_muhat)
        if any(b is None for b in blocks):
            raise ShapeMismatchError("tangent has unspecified coordinate blocks")
        return np.concatenate([np.asarray(b, dtype=np.complex128) for b in blocks])

    def s_components(self, kmax: int = 2) -> dict:
        """Power-sum components d s_k = k sum_j lamhat_j^{k-1} d lamhat_j.

        Falls back to the stored closed-form d_s when the lamhat block is
        not available.
        """
        if self.d_lamhat is None:
            if self.d_s is None:
                raise ShapeMismatchError("no lamhat block and no stored d_s")
            return {k: self.d_s[k] for k in range(1, kmax + 1) if k in self.d_s}
        lh = self.base.lamhat
        return {
            k: complex(k * np.sum(lh ** (k - 1) * self.d_lamhat))
            for k in range(1, kmax + 1)
        }


def numeric_field(gen: SL2Generator, c: ChartPoint, tol: float = DEFAULT_TOL,
                  step: float = 1e-5, richardson: bool = False) -> ChartTangent:
    """Induced field of a one-parameter subgroup by central differences.

    Chart coordinates of the flowed pair are tracked against c so the
    difference quotient follows one analytic branch.  With richardson=True
    the step-halved quotient is extrapolated one order.
    """
    p = from_chart(c, tol)

    def coords(t: float) -> np.ndarray:
        return to_chart_tracked(act_pair(gen.exp(t), p), c, tol).vector()

    def quotient(h: float) -> np.ndarray:
        return (coords(h) - coords(-h)) / (2.0 * h)

    d = quotient(step)
    if richardson:
        d = (4.0 * quotient(step / 2.0) - d) / 3.0
    n = c.n
    return ChartTangent(
        base=c,
        d_lam=d[:n],
        d_lamhat=d[n : 2 * n + 1],
        d_mu=d[2 * n + 1 : 3 * n + 1],
        d_muhat=d[3 * n + 1 :],
    )


def analytic_field(gen: SL2Generator, c: ChartPoint) -> ChartTangent:
    """Closed-form components of the induced fields.

    Lower shear 'e': the full field is muhat_k' = lamhat_k with all other
    coordinates frozen.  Diagonal 'h': power-sum components
    (s_1, 2 s_2).  Upper shear 'f': power-sum components
    (sum muhat, 2 sum lamhat muhat), valid where mu = 0 (there the second
    matrix has no commuting diagonal part).  Components the closed forms do
    not determine are left None.
    """
    z = gen.coeff
    if gen.kind == "e":
        n = c.n
        return ChartTangent(
            base=c,
            d_lam=np.zeros(n, dtype=np.complex128),
            d_lamhat=np.zeros(n + 1, dtype=np.complex128),
            d_mu=np.zeros(n, dtype=np.complex128),
            d_muhat=z * c.lamhat.copy(),
        )
    if gen.kind == "h":
        s = eigs_to_power_sums(c.lamhat, 2)
        return ChartTangent(base=c, d_s={1: z * s[0], 2: 2.0 * z * s[1]})
    return ChartTangent(
        base=c,
        d_s={
            1: z * complex(np.sum(c.muhat)),
            2: 2.0 * z * complex(np.sum(c.lamhat * c.muhat)),
        },
    )


# ---------------------------------------------------------------------------
# independence certificate


def find_independence_point(n: int, tau: complex, seed: int,
                            tol: float = DEFAULT_TOL,
                            max_tries: int = 200) -> ChartPoint:
    """Seeded slice point where the three induced fields are independent.

    Looks for coordinates with mu = 0, matching traces (sum lam = sum
    lamhat), vanishing second corner (via project_to_slice), and the
    nondegeneracy |(sum muhat) s_2 - (sum lamhat muhat) s_1| > 0.1 * scale
    with scale = max(1, |s_1|, |s_2|).  muhat is resampled inside the
    slice-constraint kernel until the nondegeneracy holds.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        lam = spaced_points(rng, n)
        lamhat = spaced_points(rng, n + 1) + (0.4 + 0.3j)
        lamhat = lamhat - (np.sum(lamhat) - np.sum(lam)) / (n + 1)
        if min_gap(lamhat) < 0.3 or float(np.abs(lamhat).max()) < 0.1:
            continue
        cross = np.abs(lam[:, None] - lamhat[None, :]).min()
        if cross < 0.05:
            continue
        muhat = rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1)
        c = ChartPoint(lam, lamhat, np.zeros(n), muhat, tau)
        s = eigs_to_power_sums(lamhat, 2)
        scale = max(1.0, abs(s[0]), abs(s[1]))
        for _ in range(16):
            c = project_to_slice(c, tol)
            val = np.sum(c.muhat) * s[1] - np.sum(c.lamhat * c.muhat) * s[0]
            if abs(val) > 0.1 * scale:
                return c
            fresh = rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1)
            c = ChartPoint(lam, lamhat, np.zeros(n), c.muhat + fresh, tau)
    raise SearchExhaustedError("no nondegenerate slice point within the retry budget")


def slice_tangency(gen: SL2Generator, c: ChartPoint, tol: float = DEFAULT_TOL,
                   step: float = 1e-5):
    """Flow derivatives of the two slice functions at a chart point.

    The slice functions (trace mismatch and second corner) are invariant
    under embedded basechange, so they are evaluated on the flowed pair
    directly; both derivatives vanish when the field is tangent to the
    slice at c.  Returns (|d trace mismatch|, |d second corner|).
    """
    p = from_chart(c, tol)

    def values(t: float) -> np.ndarray:
        return np.array(slice_residual(act_pair(gen.exp(t), p)))

    d = (values(step) - values(-step)) / (2.0 * step)
    return float(abs(d[0])), float(abs(d[1]))


def independence_rank(c: ChartPoint, tol: float = DEFAULT_TOL,
                      step: float = 1e-5, rank_tol: float = 1e-8):
    """Numeric rank of the three induced fields stacked at c.

    Returns (rank, ratio) with ratio the smallest over largest singular
    value of the 3 x (4 n + 2) stack of the lower-shear, upper-shear and
    scaling fields.
    """
    rows = [
        numeric_field(gen, c, tol=tol, step=step).vector()
        for gen in (GEN_E, GEN_F, GEN_H)
    ]
    M = np.vstack(rows)
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0, 0.0
    rank = int(np.count_nonzero(s > rank_tol * s[0]))
    return rank, float(s[-1] / s[0])


def random_sl2(seed: int) -> SL2Element:
    """Seeded unit-determinant element with moderate entries."""
    rng = np.random.default_rng(seed)

    def draw():
        return complex(rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))

    a = draw() + 1.5  # keep the pivot away from zero
    b, c = draw(), draw()
    d = (1.0 + b * c) / a
    return SL2Element(a, b, c, d)
