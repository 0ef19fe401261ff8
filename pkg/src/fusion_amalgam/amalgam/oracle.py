"""Naive reference reduction for words in X, used to cross-check the normal form.

Works on raw sequences of (side, factor element) pairs: rescan until no two
neighbours share a factor and no entry lies in C.  Only factor
multiplication, C-membership and the identification of C are used; the coset
transversals are not consulted until the final canonicalisation step.
"""
from __future__ import annotations

from ..core.local import LocalElement
from .context import AmalgamContext
from .words import AmalgamLetter, AmalgamWord

Raw = list[tuple[str, LocalElement]]


def expand(ctx: AmalgamContext, w: AmalgamWord) -> Raw:
    seq: Raw = [("A", ctx.c_to_side(w.c, "A"))]
    seq += [(l.f, ctx.letter_element(l)) for l in w.letters]
    return seq


def expand_inverse(ctx: AmalgamContext, w: AmalgamWord) -> Raw:
    return [(side, ctx.factors[side].inv(g)) for side, g in reversed(expand(ctx, w))]


def _other(side: str) -> str:
    return "B" if side == "A" else "A"


def rescan_reduce(ctx: AmalgamContext, seq: Raw) -> Raw:
    """Reduce to an alternating sequence of non-C elements, or a single C element."""
    seq = list(seq)
    changed = True
    while changed:
        changed = False
        for i, (side, g) in enumerate(seq):
            f = ctx.factors[side]
            if len(seq) > 1 and f.in_carter(g):
                c = ctx.c_from_side(g, side)
                if i + 1 < len(seq):
                    nside, ng = seq[i + 1]
                    seq[i + 1] = (nside, ctx.factors[nside].mul(ctx.c_to_side(c, nside), ng))
                else:
                    pside, pg = seq[i - 1]
                    seq[i - 1] = (pside, ctx.factors[pside].mul(pg, ctx.c_to_side(c, pside)))
                del seq[i]
                changed = True
                break
            if i + 1 < len(seq) and seq[i + 1][0] == side:
                seq[i] = (side, f.mul(g, seq[i + 1][1]))
                del seq[i + 1]
                changed = True
                break
    return seq


def naive_normal_form(ctx: AmalgamContext, seq: Raw) -> AmalgamWord:
    reduced = rescan_reduce(ctx, seq)
    if not reduced:
        return ctx.identity
    if len(reduced) == 1 and ctx.factors[reduced[0][0]].in_carter(reduced[0][1]):
        return AmalgamWord(ctx.c_from_side(reduced[0][1], reduced[0][0]), ())
    carry = (0, 0)
    letters = []
    for side, g in reversed(reduced):
        h = ctx.factors[side].mul(g, ctx.c_to_side(carry, side))
        carry, rep = ctx.coset_decompose(h, side)
        letters.append(AmalgamLetter(side, ctx.reps[side].index(rep)))
    return AmalgamWord(carry, tuple(reversed(letters)))


def is_trivial(ctx: AmalgamContext, seq: Raw) -> bool:
    reduced = rescan_reduce(ctx, seq)
    if not reduced:
        return True
    if len(reduced) > 1:
        return False
    side, g = reduced[0]
    return g == ctx.factors[side].identity


def oracle_product(ctx: AmalgamContext, *words: AmalgamWord) -> AmalgamWord:
    seq: Raw = []
    for w in words:
        seq += expand(ctx, w)
    return naive_normal_form(ctx, seq)


def represents(ctx: AmalgamContext, w: AmalgamWord, seq: Raw) -> bool:
    """True when the raw sequence equals w in X, decided without the transversal."""
    return is_trivial(ctx, list(seq) + expand_inverse(ctx, w))
