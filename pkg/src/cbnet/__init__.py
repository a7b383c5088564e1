"""cbnet: learn periodic Bayesian-network activity patterns from binary streams.

The library folds raw on/off sensor streams at candidate periods, estimates
per-clique conditional probability tables in closed form, scores directed
edges with a conditional log-probability dependence measure, and recovers
the unknown period blindly from the lag-dependence profile and its DFT.  A
conditional-mutual-information baseline and a road-traffic simulator round
out the toolkit.
"""

from .baseline import CmiScores, cmi_edge, conventional_learn
from .cpt import (
    DEFAULT_EPS,
    CliqueCPT,
    ConditionMatrix,
    bbcpt,
    condition_matrix,
    counting_oracle,
)
from .dependence import (
    DependenceMatrix,
    DifferenceOperator,
    cpbd_clique,
    difference_operator,
    direct_cpbd,
    normalize,
)
from .errors import (
    BoundaryProbabilityError,
    CbnetError,
    ConfigError,
    DimensionError,
    EmptyInputError,
    InsufficientDataError,
    NoPeakError,
    NoValleyError,
    PeriodRangeError,
    PhaseRangeError,
    SessionBoundsError,
    ShapeMismatchError,
)
from .observations import FoldedObservations, ObservationStream, fold, frame_pair
from .period import (
    CbnModel,
    LagProfile,
    LearnConfig,
    PeriodEstimate,
    dft_magnitude,
    find_tp,
    find_ts,
    lag_dependence,
    learn_cbn,
    resolve_period,
)
from .simulator import Simulation, SimulationConfig, UserState, run

__version__ = "0.1.0"

__all__ = [
    "BoundaryProbabilityError",
    "CbnModel",
    "CbnetError",
    "CliqueCPT",
    "CmiScores",
    "ConditionMatrix",
    "ConfigError",
    "DEFAULT_EPS",
    "DependenceMatrix",
    "DifferenceOperator",
    "DimensionError",
    "EmptyInputError",
    "FoldedObservations",
    "InsufficientDataError",
    "LagProfile",
    "LearnConfig",
    "NoPeakError",
    "NoValleyError",
    "ObservationStream",
    "PeriodEstimate",
    "PeriodRangeError",
    "PhaseRangeError",
    "SessionBoundsError",
    "ShapeMismatchError",
    "Simulation",
    "SimulationConfig",
    "UserState",
    "bbcpt",
    "cmi_edge",
    "condition_matrix",
    "conventional_learn",
    "counting_oracle",
    "cpbd_clique",
    "dft_magnitude",
    "difference_operator",
    "direct_cpbd",
    "find_tp",
    "find_ts",
    "fold",
    "frame_pair",
    "lag_dependence",
    "learn_cbn",
    "normalize",
    "resolve_period",
    "run",
]
