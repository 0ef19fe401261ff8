"""Normal-form arithmetic in the amalgam X = A *_C B."""
from .abelian import amalgam_abelianization
from .context import AmalgamContext, ContextMismatch, build_context
from .euler import (
    ExactRational,
    RankResult,
    displayed_rank_formula,
    euler_characteristic,
    euler_characteristic_closed_form,
    free_rank_of_index,
)
from .words import INFINITE, AmalgamLetter, AmalgamWord
