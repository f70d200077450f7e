"""Diameters of finite groups and their direct powers."""

from .bounds import BoundReport, verify_report
from .catalog import CATALOG, parse_group_spec
from .errors import (
    BoundViolation,
    BudgetExceeded,
    DiamlabError,
    GroupAxiomError,
    HypothesisError,
    NotGeneratingError,
    NotNormalError,
    NotSolvableError,
    UnreachableError,
)
from .gensets import max_diameters, rank
from .groups import DenseGroup, FiniteGroup, PowerGroup, derived_series, direct_power
from .schreier import Decomposer, SeriesDecomposer
from .wordlen import Word, diameter, length_table

__version__ = "0.1.0"
