"""Finite building blocks: prime-field symplectic data, extraspecial groups, local factors."""
from .extraspecial import ExtraspecialElement, ExtraspecialGroup
from .finite import (
    AbelianQuotient,
    CapExceeded,
    abelianization,
    centralizer,
    closure,
    normalizer,
    primary_decomposition,
)
from .local import (
    BracketReport,
    CarterData,
    CarterError,
    LocalElement,
    LocalFactor,
    bracket_check,
    build_local_factor,
    carter_subgroup,
    trivial_action_factor,
)
from .params import DEFAULT_SIZE_CAP, AmalgamParameters, SizeCapExceeded
from .symplectic import SearchError, find_acting_matrix, minimal_rank, sp_order

subgroup_closure = closure
