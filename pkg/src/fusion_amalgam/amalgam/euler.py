"""Exact Euler characteristic of X and ranks of its free subgroups of finite index."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core.params import AmalgamParameters

ExactRational = Fraction


def euler_characteristic(params: AmalgamParameters) -> Fraction:
    """chi(X) = 1/|A| + 1/|B| - 1/|C|."""
    return Fraction(1, params.orderA) + Fraction(1, params.orderB) - Fraction(1, params.orderC)


def euler_characteristic_closed_form(params: AmalgamParameters) -> Fraction:
    """(q^(2m) + p^(2n) - p^(2n) q^(2m)) / (pq p^(2n) q^(2m)); an independent re-derivation."""
    p, q = params.p, params.q
    P2n, Q2m = p ** (2 * params.n), q ** (2 * params.m)
    return Fraction(Q2m + P2n - P2n * Q2m, p * q * P2n * Q2m)


@dataclass(frozen=True)
class RankResult:
    index: int
    rank: int
    displayed_formula: Fraction

    @property
    def agrees(self) -> bool:
        return self.displayed_formula == self.rank


def displayed_rank_formula(params: AmalgamParameters, index: int) -> Fraction:
    """1 + (p^(2n) q^(2m) - p^(2n) - q^(2m)) index / (p^(2n) q^(2m)).

    Kept for comparison only: it omits a factor pq in the denominator and
    disagrees with 1 - chi(X) index.
    """
    P2n, Q2m = params.p ** (2 * params.n), params.q ** (2 * params.m)
    return 1 + Fraction((P2n * Q2m - P2n - Q2m) * index, P2n * Q2m)


def free_rank_of_index(params: AmalgamParameters, index: int) -> RankResult:
    """Rank of a free subgroup of the given finite index, r = 1 - chi(X) * index."""
    if not isinstance(index, int) or index < 1:
        raise ValueError("index must be a positive integer")
    pq_order = params.orderP * params.orderQ
    if index % pq_order:
        raise ValueError(f"index {index} is not divisible by |P||Q| = {pq_order}")
    r = 1 - euler_characteristic(params) * index
    if r.denominator != 1:
        raise ArithmeticError(f"1 - chi * index = {r} is not an integer")
    rank = int(r)
    if rank <= 1:
        raise ArithmeticError(f"rank {rank} is not greater than 1")
    return RankResult(index, rank, displayed_rank_formula(params, index))
