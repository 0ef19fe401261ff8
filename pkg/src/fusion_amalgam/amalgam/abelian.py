from __future__ import annotations

from ..core.finite import AbelianQuotient, cokernel_invariants
from .context import AmalgamContext


def amalgam_abelianization(ctx: AmalgamContext, amalgamate: bool = True) -> list[int]:
    """Invariant factors of X/[X,X] = coker(C -> A_ab + B_ab).

    With ``amalgamate=False`` the C-relations are dropped, giving the free
    product A * B (a negative control).
    """
    qa = AbelianQuotient(ctx.factors["A"])
    qb = AbelianQuotient(ctx.factors["B"])
    na, nb = qa.ngens, qb.ngens
    rows = [tuple(r) + (0,) * nb for r in qa.relations]
    rows += [(0,) * na + tuple(r) for r in qb.relations]
    if amalgamate:
        for c in ((1, 0), (0, 1)):
            va = qa.coordinates(ctx.c_to_side(c, "A"))
            vb = qb.coordinates(ctx.c_to_side(c, "B"))
            rows.append(tuple(va) + tuple(-v for v in vb))
    return cokernel_invariants(rows, na + nb)
