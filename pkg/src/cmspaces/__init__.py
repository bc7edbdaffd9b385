"""Matrix models, spectral charts, and flow calculus for generalized
Calogero-Moser phase spaces.

The package realizes the level set [A, B] - v w = tau I as concrete seeded
matrix data, embeds rank-two points into bordered matrix pairs, normalizes
them to a spectral chart of 4n+2 coordinates with a closed-form inverse,
and equips the pair space with a linear SL2 action whose one-parameter
flows, induced vector fields, and composition laws are all checkable
numerically.  `python -m cmspaces verify --suite all` runs the whole
battery.
"""

from .canonical import (
    RegularityReport,
    in_regular_locus,
    is_gauge_regular,
    is_regular_semisimple,
    is_strongly_semisimple,
    normalize,
    orbit_dimension,
    regularity_report,
)
from .chart import (
    ChartPoint,
    Decomposition,
    chart_jacobian,
    decompose,
    from_chart,
    is_normal_form,
    project_to_slice,
    random_chart_point,
    slice_residual,
    to_chart,
    to_chart_tracked,
)
from .errors import CMSpacesError
from .flowcalc import (
    BRACKET_SIGN,
    WitnessReport,
    bracket_flow,
    bracket_target,
    compatible_witness,
    detect_bracket_sign,
    flow_exact,
    lnd_degree,
    pair_distance,
    trotter_flow,
    trotter_target,
)
from .jsonio import decode, dumps, encode, loads
from .sl2 import (
    GEN_E,
    GEN_F,
    GEN_H,
    ChartTangent,
    SL2Element,
    SL2Generator,
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
from .variety import (
    AugmentedPair,
    DictionaryReport,
    DictionaryVariant,
    GaugeElement,
    Representation,
    augment,
    calibrate_dictionary,
    fingerprint,
    gauge_act,
    gauge_act_pair,
    level_residual,
    level_shift,
    moment_map,
    moment_real,
    on_level,
    on_shell,
    pair_fingerprint,
    pair_moment,
    project,
    quiver_moment,
    random_gauge,
    random_point,
    random_quadruple,
)
from .verify import RunConfig, run as run_verification

__version__ = "0.1.0"

__all__ = [
    "AugmentedPair",
    "BRACKET_SIGN",
    "CMSpacesError",
    "ChartPoint",
    "ChartTangent",
    "Decomposition",
    "DictionaryReport",
    "DictionaryVariant",
    "GEN_E",
    "GEN_F",
    "GEN_H",
    "GaugeElement",
    "RegularityReport",
    "Representation",
    "RunConfig",
    "SL2Element",
    "SL2Generator",
    "WitnessReport",
    "act_components",
    "act_pair",
    "analytic_field",
    "augment",
    "bracket_flow",
    "bracket_target",
    "calibrate_dictionary",
    "chart_jacobian",
    "compatible_witness",
    "decode",
    "decompose",
    "detect_bracket_sign",
    "dumps",
    "encode",
    "find_independence_point",
    "fingerprint",
    "fixed_point_probe",
    "flow_exact",
    "from_chart",
    "gauge_act",
    "gauge_act_pair",
    "in_regular_locus",
    "independence_rank",
    "is_gauge_regular",
    "is_normal_form",
    "is_regular_semisimple",
    "is_strongly_semisimple",
    "level_residual",
    "level_shift",
    "lnd_degree",
    "loads",
    "moment_map",
    "moment_real",
    "normalize",
    "numeric_field",
    "on_level",
    "on_shell",
    "orbit_dimension",
    "pair_distance",
    "pair_fingerprint",
    "pair_moment",
    "power_sums",
    "power_sums_to_eigs",
    "project",
    "project_to_slice",
    "quiver_moment",
    "random_chart_point",
    "random_gauge",
    "random_point",
    "random_quadruple",
    "random_sl2",
    "regularity_report",
    "run_verification",
    "sl2_exp",
    "slice_residual",
    "slice_tangency",
    "to_chart",
    "to_chart_tracked",
    "trotter_flow",
    "trotter_target",
]
