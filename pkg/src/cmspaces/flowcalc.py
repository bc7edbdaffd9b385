"""Flow composition, bracket tests, nilpotency degree, and witness functions.

The one-parameter subgroups act linearly on pairs, so every flow here is
evaluated by composing 2 x 2 group elements first and acting on the pair
once; the splitting formulas below are statements about the group elements
alone.  Lie-Trotter:

    (exp(t E / n) exp(t F / n))^n  ->  exp(t (E + F)),   error O(1/n),

and the commutator square

    M = exp(-s F) exp(-s E) exp(s F) exp(s E),  s = sqrt(t/n),
    M^n -> exp(t [F, E]),                        error O(t^{3/2} / sqrt(n)).

The action is a left action, g . (M, N) = (a M + b N, c M + d N) as rows,
which reverses brackets when pushed to vector fields: the field commutator
of the 'e' and 'f' flows equals minus the field of the matrix bracket
[E, F] = -H, i.e. plus the 'h' field.  BRACKET_SIGN records this once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedFitError, WitnessVanishesError
from .chart import ChartPoint, from_chart, to_chart_tracked
from .linalg import DEFAULT_TOL, frob
from .sl2 import GEN_E, GEN_F, GEN_H, SL2Element, SL2Generator, act_pair, sl2_exp
from .variety import AugmentedPair

# The pair action is a left action written on row vectors of matrices, so
# pushing generators to vector fields reverses the bracket: the commutator
# of the 'e' and 'f' FLOWS matches exp(+t H), while the matrix bracket is
# [E, F] = -H.  Flows computed here land on BRACKET_SIGN * [E, F].
BRACKET_SIGN: int = -1

_GENS = {"e": GEN_E, "f": GEN_F, "h": GEN_H}


def flow_exact(kind: str, t: float, p: AugmentedPair) -> AugmentedPair:
    """One-parameter subgroup flow by its closed-form exponential."""
    return act_pair(_GENS[kind].exp(t), p)


def trotter_element(gen1: SL2Generator, gen2: SL2Generator, t: float,
                    n_steps: int) -> SL2Element:
    """(exp((t/n) gen1) exp((t/n) gen2))^n as a single group element."""
    if n_steps < 1:
        raise ValueError("need at least one step")
    s = t / n_steps
    step = gen1.exp(s).compose(gen2.exp(s))
    return SL2Element.from_matrix(np.linalg.matrix_power(step.matrix(), n_steps))


def trotter_flow(gen1: SL2Generator, gen2: SL2Generator, t: float,
                 n_steps: int, p: AugmentedPair) -> AugmentedPair:
    """Split flow toward exp(t (gen1 + gen2)); error O(1/n) in the step count.

    Exact (up to rounding) for every n when the generators commute.
    """
    return act_pair(trotter_element(gen1, gen2, t, n_steps), p)


def trotter_target(gen1: SL2Generator, gen2: SL2Generator, t: float,
                   p: AugmentedPair) -> AugmentedPair:
    """Exact endpoint exp(t (gen1 + gen2)) of the split flow."""
    return act_pair(sl2_exp(t * (gen1.matrix() + gen2.matrix())), p)


def bracket_element(gen1: SL2Generator, gen2: SL2Generator, t: float,
                    n_steps: int) -> SL2Element:
    """Commutator-square composition approximating exp(t [gen2, gen1]).

    One square is exp(-s g2) exp(-s g1) exp(s g2) exp(s g1) at
    s = sqrt(t/n); as a flow composition that is (second flow, first flow,
    inverse second, inverse first) applied left to right.  n squares
    compose to the bracket flow at time t, error O(t^{3/2} / sqrt(n)).
    """
    if n_steps < 1:
        raise ValueError("need at least one step")
    if t < 0:
        raise ValueError("bracket composition needs t >= 0")
    s = float(np.sqrt(t / n_steps))
    square = (
        gen2.exp(-s)
        .compose(gen1.exp(-s))
        .compose(gen2.exp(s))
        .compose(gen1.exp(s))
    )
    return SL2Element.from_matrix(np.linalg.matrix_power(square.matrix(), n_steps))


def bracket_flow(gen1: SL2Generator, gen2: SL2Generator, t: float,
                 n_steps: int, p: AugmentedPair) -> AugmentedPair:
    """Commutator-square flow; converges to bracket_target as steps grow.

    The identity for every n when the generators commute.
    """
    return act_pair(bracket_element(gen1, gen2, t, n_steps), p)


def bracket_target(gen1: SL2Generator, gen2: SL2Generator, t: float,
                   p: AugmentedPair) -> AugmentedPair:
    """Exact endpoint exp(t [gen2, gen1]) of the commutator flow.

    For (gen1, gen2) the two shears this is exp(t H): the matrix bracket
    of the shears is [lower, upper] = -H, the squares realize the reversed
    bracket, and the flow lands on the scaling subgroup with positive
    weight (BRACKET_SIGN).
    """
    g1, g2 = gen1.matrix(), gen2.matrix()
    return act_pair(sl2_exp(t * (g2 @ g1 - g1 @ g2)), p)


def pair_distance(p: AugmentedPair, q: AugmentedPair) -> float:
    return max(frob(p.A - q.A), frob(p.B - q.B))


def detect_bracket_sign(t: float, n_steps: int, p: AugmentedPair) -> int:
    """Which of exp(-+ t H) the (lower, upper) commutator flow approaches.

    Returns +1 if the flow is closer to exp(t H) (the BRACKET_SIGN = -1
    convention: flows realize minus the matrix bracket [E, F] = -H),
    -1 otherwise.  The sign is a global property of the action; callers
    assert it is the same at every base point.
    """
    reached = bracket_flow(GEN_E, GEN_F, t, n_steps, p)
    plus = act_pair(GEN_H.exp(t), p)
    minus = act_pair(GEN_H.exp(-t), p)
    return 1 if pair_distance(reached, plus) <= pair_distance(reached, minus) else -1


# ---------------------------------------------------------------------------
# nilpotency degree of flow pullbacks


_OBSERVABLES = {
    "trace_second": lambda p: complex(np.trace(p.B)),
    "trace_first": lambda p: complex(np.trace(p.A)),
    "trace_second_sq": lambda p: complex(np.trace(p.B @ p.B)),
    "trace_mixed": lambda p: complex(np.trace(p.A @ p.B)),
}


def _chebyshev_nodes(count: int) -> np.ndarray:
    k = np.arange(count)
    return np.cos((2 * k + 1) * np.pi / (2 * count))


def lnd_degree(kind: str, observable, p: AugmentedPair, d_max: int = 6,
               fit_tol: float = 1e-8) -> int | None:
    """Least polynomial degree of t -> observable(flow(t, p)), or None.

    Only the shear flows 'e' and 'f' are polynomial on trace observables;
    the scaling flow is not, and the fit reports that as None rather than
    a large degree.  Samples at d_max + 2 Chebyshev nodes on [-1, 1] and
    accepts the least degree whose residual is below fit_tol * scale.
    """
    if kind not in ("e", "f"):
        raise ValueError("nilpotency degree is defined for the shear flows only")
    if isinstance(observable, str):
        observable = _OBSERVABLES[observable]
    nodes = _chebyshev_nodes(d_max + 2)
    samples = np.array([observable(flow_exact(kind, t, p)) for t in nodes])
    scale = max(1.0, float(np.abs(samples).max()))
    for deg in range(d_max + 1):
        coeffs = np.polynomial.polynomial.polyfit(nodes, samples, deg)
        resid = np.abs(
            np.polynomial.polynomial.polyval(nodes, coeffs) - samples
        ).max()
        if resid <= fit_tol * scale:
            return deg
    return None


# ---------------------------------------------------------------------------
# compatible witness


@dataclass(frozen=True)
class WitnessReport:
    """Derivative residuals certifying tr of the second matrix as a witness.

    The function h = tr of the second matrix satisfies: the upper shear
    (which only moves the first matrix) fixes h outright, and along the
    lower shear h moves at exactly first order with derivative tr of the
    first matrix.  upper_shear_residual collects all derivatives along the
    upper shear, lower_shear_value is the first derivative along the lower
    shear, value_residual its deviation from tr of the first matrix, and
    lower_shear_residual the second and higher derivatives there.
    """

    upper_shear_residual: float
    lower_shear_value: complex
    value_residual: float
    lower_shear_residual: float
    scale: float

    @property
    def residual(self) -> float:
        return max(
            self.upper_shear_residual, self.value_residual, self.lower_shear_residual
        )


def _fit_derivatives(kind: str, p: AugmentedPair, span: float = 0.5,
                     degree: int = 4) -> np.ndarray:
    """Polynomial coefficients of t -> tr(second matrix) along a shear flow."""
    nodes = span * _chebyshev_nodes(degree + 2)
    samples = np.array(
        [complex(np.trace(flow_exact(kind, t, p).B)) for t in nodes]
    )
    coeffs = np.polynomial.polynomial.polyfit(nodes, samples, degree)
    resid = np.abs(
        np.polynomial.polynomial.polyval(nodes, coeffs) - samples
    ).max()
    if resid > 1e-6 * max(1.0, float(np.abs(samples).max())):
        raise IllConditionedFitError(
            f"shear pullback of the trace is not polynomial to fit tolerance "
            f"(residual {resid:.3e})"
        )
    return coeffs


def compatible_witness(p: AugmentedPair, floor: float = 1e-8) -> WitnessReport:
    """Certify h = tr(second matrix) against the two shear flows.

    Checks (by exact-flow polynomial fits): the upper shear leaves h
    constant; along the lower shear the first derivative equals tr(first
    matrix) and the second and higher derivatives vanish.  Points where
    tr(first matrix) nearly vanishes cannot anchor the certificate and
    raise WitnessVanishesError.
    """
    scale = max(1.0, frob(p.A), frob(p.B))
    anchor = complex(np.trace(p.A))
    if abs(anchor) <= floor * scale:
        raise WitnessVanishesError(
            "tr of the first matrix vanishes at this point; the witness "
            "derivative has no signal here"
        )
    upper = _fit_derivatives("f", p)
    lower = _fit_derivatives("e", p)
    upper_resid = float(np.abs(upper[1:]).max()) if upper.size > 1 else 0.0
    value = complex(lower[1]) if lower.size > 1 else 0.0 + 0.0j
    second = abs(2.0 * lower[2]) if lower.size > 2 else 0.0
    higher = float(np.abs(lower[3:]).max()) if lower.size > 3 else 0.0
    return WitnessReport(
        upper_shear_residual=upper_resid,
        lower_shear_value=value,
        value_residual=abs(value - anchor),
        lower_shear_residual=max(second, higher),
        scale=scale,
    )


# ---------------------------------------------------------------------------
# chart-level flow, for convergence studies that track coordinates


def flow_in_chart(kind: str, t: float, c: ChartPoint,
                  tol: float = DEFAULT_TOL) -> ChartPoint:
    """Flow a chart point and read the result back in tracked coordinates."""
    p = from_chart(c, tol)
    return to_chart_tracked(flow_exact(kind, t, p), c, tol)
