"""Extraspecial groups of order r^(2k+1) and exponent r (r odd).

Elements are pairs (x, c) with x in F_r^(2k) and c in F_r, multiplied by

    (x, c)(x', c') = (x + x', c + c' + omega(x, x') / 2)

so that powers are (x, c)^t = (t x, t c) and commutators are central.
"""
from __future__ import annotations

import itertools
from typing import Iterator, NamedTuple

from .symplectic import Matrix, omega, vec_mat


class ExtraspecialElement(NamedTuple):
    x: tuple[int, ...]
    c: int


class ExtraspecialGroup:
    def __init__(self, r: int, k: int):
        if r % 2 == 0:
            raise ValueError("only odd characteristic is supported")
        if k < 1:
            raise ValueError("rank must be positive")
        self.r = r
        self.k = k
        self.dim = 2 * k
        self.half = pow(2, -1, r)
        self.identity = ExtraspecialElement((0,) * self.dim, 0)

    def __repr__(self) -> str:
        return f"ExtraspecialGroup(r={self.r}, k={self.k})"

    @property
    def order(self) -> int:
        return self.r ** (self.dim + 1)

    def element(self, x, c=0) -> ExtraspecialElement:
        if len(x) != self.dim:
            raise ValueError(f"expected a vector of length {self.dim}")
        return ExtraspecialElement(tuple(v % self.r for v in x), c % self.r)

    def _check(self, *elems: ExtraspecialElement) -> None:
        for e in elems:
            if len(e.x) != self.dim:
                raise ValueError(f"element {e} does not belong to {self}")

    def mul(self, a: ExtraspecialElement, b: ExtraspecialElement) -> ExtraspecialElement:
        r = self.r
        x, y = a.x, b.x
        if len(x) != self.dim or len(y) != self.dim:
            self._check(a, b)
        k = self.k
        w = 0
        for i in range(k):
            w += x[i] * y[k + i] - x[k + i] * y[i]
        return ExtraspecialElement(
            tuple((u + v) % r for u, v in zip(x, y)),
            (a.c + b.c + self.half * w) % r,
        )

    def inv(self, a: ExtraspecialElement) -> ExtraspecialElement:
        r = self.r
        return ExtraspecialElement(tuple(-v % r for v in a.x), -a.c % r)

    def power(self, a: ExtraspecialElement, t: int) -> ExtraspecialElement:
        r = self.r
        return ExtraspecialElement(tuple(t * v % r for v in a.x), t * a.c % r)

    def commutator(self, a: ExtraspecialElement, b: ExtraspecialElement) -> ExtraspecialElement:
        """a b a^-1 b^-1, which is (0, omega(x, x'))."""
        self._check(a, b)
        return ExtraspecialElement(self.identity.x, omega(a.x, b.x, self.r))

    def apply(self, m: Matrix, a: ExtraspecialElement) -> ExtraspecialElement:
        """Automorphism induced by a symplectic matrix; fixes the centre."""
        return ExtraspecialElement(vec_mat(a.x, m, self.r), a.c)

    def is_central(self, a: ExtraspecialElement) -> bool:
        return not any(a.x)

    @property
    def center_generator(self) -> ExtraspecialElement:
        return ExtraspecialElement(self.identity.x, 1)

    @property
    def generators(self) -> list[ExtraspecialElement]:
        basis = []
        for i in range(self.dim):
            x = [0] * self.dim
            x[i] = 1
            basis.append(ExtraspecialElement(tuple(x), 0))
        return basis

    def center(self) -> list[ExtraspecialElement]:
        return [ExtraspecialElement(self.identity.x, c) for c in range(self.r)]

    def elements(self) -> Iterator[ExtraspecialElement]:
        """All elements, in lexicographic order of (x, c)."""
        for x in itertools.product(range(self.r), repeat=self.dim):
            for c in range(self.r):
                yield ExtraspecialElement(x, c)
