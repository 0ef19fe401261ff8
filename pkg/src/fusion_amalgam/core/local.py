"""The local factors A = Q x| <sigma> and B = P x| <tau> and their Carter subgroups."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, NamedTuple

from . import finite
from .extraspecial import ExtraspecialElement, ExtraspecialGroup
from .params import DEFAULT_SIZE_CAP, AmalgamParameters, SizeCapExceeded
from .symplectic import Matrix, certify, find_acting_matrix, identity, mat_pow, vec_mat

SIDES = ("A", "B")


class LocalElement(NamedTuple):
    """h * act^s, with h in the extraspecial normal subgroup."""

    h: ExtraspecialElement
    s: int


class LocalFactor:
    """Semidirect product of an extraspecial group with a cyclic group of prime order.

    Side A: Q of order q^(2m+1) over F_q, acted on by sigma of order p.
    Side B: P of order p^(2n+1) over F_p, acted on by tau of order q.
    """

    def __init__(self, side: str, params: AmalgamParameters, matrix: Matrix, validate: bool = True):
        if side not in SIDES:
            raise ValueError(f"side must be 'A' or 'B', got {side!r}")
        self.side = side
        self.params = params
        if side == "A":
            self.field, self.rank, self.acting_order = params.q, params.m, params.p
        else:
            self.field, self.rank, self.acting_order = params.p, params.n, params.q
        self.matrix = tuple(tuple(row) for row in matrix)
        if validate:
            certify(self.matrix, self.acting_order, self.field)
        self.ext = ExtraspecialGroup(self.field, self.rank)
        self._powers = [mat_pow(self.matrix, s, self.field) for s in range(self.acting_order)]
        self.identity = LocalElement(self.ext.identity, 0)

    def __repr__(self) -> str:
        return f"LocalFactor({self.side}, p={self.params.p}, q={self.params.q})"

    @property
    def order(self) -> int:
        return self.acting_order * self.ext.order

    def act(self, s: int, h: ExtraspecialElement) -> ExtraspecialElement:
        """sigma^s(h)."""
        return ExtraspecialElement(vec_mat(h.x, self._powers[s % self.acting_order], self.field), h.c)

    def mul(self, a: LocalElement, b: LocalElement) -> LocalElement:
        h2 = b.h if a.s == 0 else self.act(a.s, b.h)
        return LocalElement(self.ext.mul(a.h, h2), (a.s + b.s) % self.acting_order)

    def inv(self, a: LocalElement) -> LocalElement:
        return LocalElement(self.act(-a.s, self.ext.inv(a.h)), -a.s % self.acting_order)

    def power(self, a: LocalElement, t: int) -> LocalElement:
        if t < 0:
            a, t = self.inv(a), -t
        result, base = self.identity, a
        while t:
            if t & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            t >>= 1
        return result

    def conjugate(self, g: LocalElement, x: LocalElement) -> LocalElement:
        return self.mul(self.mul(self.inv(x), g), x)

    def commutator(self, a: LocalElement, b: LocalElement) -> LocalElement:
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def element_order(self, a: LocalElement) -> int:
        return finite.element_order(self, a)

    def embed(self, h: ExtraspecialElement) -> LocalElement:
        return LocalElement(h, 0)

    @property
    def center_generator(self) -> LocalElement:
        """z (side A) or w (side B): generator of the centre of the extraspecial part."""
        return LocalElement(self.ext.center_generator, 0)

    @property
    def acting_generator(self) -> LocalElement:
        """sigma (side A) or tau (side B)."""
        return LocalElement(self.ext.identity, 1)

    @property
    def generators(self) -> list[LocalElement]:
        return [self.embed(e) for e in self.ext.generators] + [self.acting_generator]

    def in_normal_subgroup(self, a: LocalElement) -> bool:
        return a.s == 0

    def c_element(self, central: int, acting: int) -> LocalElement:
        """z^central * sigma^acting, an element of the Carter subgroup."""
        return LocalElement(ExtraspecialElement(self.ext.identity.x, central % self.field), acting % self.acting_order)

    def in_carter(self, a: LocalElement) -> bool:
        return not any(a.h.x)

    def elements(self) -> Iterator[LocalElement]:
        """Lexicographic order on the encoding (x, c, s)."""
        a = self.acting_order
        for x in itertools.product(range(self.field), repeat=self.ext.dim):
            for c in range(self.field):
                h = ExtraspecialElement(x, c)
                for s in range(a):
                    yield LocalElement(h, s)

    @cached_property
    def element_list(self) -> list[LocalElement]:
        return list(self.elements())

    def normal_subgroup_elements(self) -> list[LocalElement]:
        return [self.embed(h) for h in self.ext.elements()]


def build_local_factor(
    params: AmalgamParameters,
    side: str,
    seed: int = 42,
    cache_dir: str | Path | None = None,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> LocalFactor:
    order = params.orderA if side == "A" else params.orderB
    if order > size_cap:
        raise SizeCapExceeded(side, order, size_cap)
    if side == "A":
        matrix = find_acting_matrix(params.p, params.q, params.m, seed, cache_dir)
    elif side == "B":
        matrix = find_acting_matrix(params.q, params.p, params.n, seed, cache_dir)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return LocalFactor(side, params, matrix)


class CarterError(RuntimeError):
    pass


@dataclass(frozen=True)
class CarterData:
    generator: LocalElement
    elements: frozenset
    normalizer_order: int


def carter_subgroup(factor: LocalFactor) -> CarterData:
    """C = <z sigma>, checked cyclic of order pq and self-normalizing by exhaustive scan."""
    d = factor.mul(factor.center_generator, factor.acting_generator)
    pq = factor.params.orderC
    elems = finite.closure(factor, [d])
    if factor.element_order(d) != pq or len(elems) != pq:
        raise CarterError(f"<d> has order {len(elems)}, expected {pq}")
    norm = finite.normalizer(factor, elems, factor.element_list)
    if norm != elems:
        raise CarterError(f"N(C) has order {len(norm)} > {pq}; the action is not fixed-point-free")
    return CarterData(d, elems, len(norm))


@dataclass(frozen=True)
class BracketReport:
    side: str
    target_order: int
    closure_order: int
    missing: LocalElement | None

    @property
    def full(self) -> bool:
        return self.missing is None


def bracket_check(factor: LocalFactor) -> BracketReport:
    """Check that {g^-1 g^act : g in the extraspecial part} generates all of it."""
    t = factor.acting_generator
    normal = factor.normal_subgroup_elements()
    gens = {factor.mul(factor.inv(g), factor.conjugate(g, t)) for g in normal}
    span = finite.closure(factor, gens)
    missing = next((g for g in normal if g not in span), None)
    return BracketReport(factor.side, len(normal), len(span), missing)


def trivial_action_factor(params: AmalgamParameters, side: str) -> LocalFactor:
    """Direct product (identity action); only a negative control, never a valid factor."""
    k = params.m if side == "A" else params.n
    return LocalFactor(side, params, identity(2 * k), validate=False)
