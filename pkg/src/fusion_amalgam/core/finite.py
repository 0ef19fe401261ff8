"""Brute-force subgroup machinery for small enumerable groups.

A "group" here is any object with ``mul``, ``inv``, ``identity``,
``generators`` and ``elements()``; both extraspecial groups and the local
factors qualify.
"""
from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors


class CapExceeded(RuntimeError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"subgroup has more than {cap} elements (reached {size})")
        self.size = size
        self.cap = cap


def closure(group, gens: Iterable, cap: int | None = None) -> frozenset:
    """Subgroup generated by ``gens``, by breadth-first right multiplication."""
    gens = list(dict.fromkeys(gens))
    seen = {group.identity}
    queue = deque([group.identity])
    mul = group.mul
    while queue:
        g = queue.popleft()
        for s in gens:
            h = mul(g, s)
            if h not in seen:
                seen.add(h)
                if cap is not None and len(seen) > cap:
                    raise CapExceeded(len(seen), cap)
                queue.append(h)
    return frozenset(seen)


def element_order(group, g) -> int:
    n, h = 1, g
    while h != group.identity:
        h = group.mul(h, g)
        n += 1
    return n


def conjugate(group, g, x):
    """g^x = x^-1 g x."""
    return group.mul(group.mul(group.inv(x), g), x)


def centralizer(group, target, ambient: Iterable | None = None) -> frozenset:
    """Elements of ``ambient`` (default: the whole group) commuting with ``target``.

    ``target`` is an element or a collection of elements.
    """
    targets = [target] if _is_element(group, target) else list(target)
    mul = group.mul
    pool = group.elements() if ambient is None else ambient
    return frozenset(g for g in pool if all(mul(g, t) == mul(t, g) for t in targets))


def normalizer(group, subgroup: Iterable, ambient: Iterable | None = None) -> frozenset:
    sub = frozenset(subgroup)
    gens = _small_generating_set(group, sub)
    pool = group.elements() if ambient is None else ambient
    return frozenset(g for g in pool if all(conjugate(group, s, g) in sub for s in gens))


def _is_element(group, obj) -> bool:
    return isinstance(obj, type(group.identity))


def _small_generating_set(group, sub: frozenset) -> list:
    gens: list = []
    span = frozenset([group.identity])
    for g in sorted(sub):
        if g not in span:
            gens.append(g)
            span = closure(group, gens)
            if len(span) == len(sub):
                break
    return gens


def normal_closure(group, gens: Iterable, cap: int | None = None) -> frozenset:
    gens = list(gens)
    sub = closure(group, gens, cap)
    changed = True
    while changed:
        changed = False
        for h in list(gens):
            for g in group.generators:
                c = conjugate(group, h, g)
                if c not in sub:
                    gens.append(c)
                    sub = closure(group, gens, cap)
                    changed = True
    return sub


def derived_subgroup(group) -> frozenset:
    gens = group.generators
    comms = [
        group.mul(group.mul(group.inv(a), group.inv(b)), group.mul(a, b))
        for i, a in enumerate(gens)
        for b in gens[i + 1:]
    ]
    return normal_closure(group, comms)


class AbelianQuotient:
    """The abelianization G/[G,G] presented on the images of ``group.generators``.

    ``coordinates(g)`` returns an integer vector v with g == prod s_i^{v_i}
    modulo [G,G]; ``relations`` generate all such vectors mapping to the
    identity.
    """

    def __init__(self, group):
        self.group = group
        self.derived = derived_subgroup(group)
        derived = list(self.derived)
        self._coset: dict[Hashable, int] = {}
        reps = []
        for g in group.elements():
            if g in self._coset:
                continue
            idx = len(reps)
            reps.append(g)
            for d in derived:
                self._coset[group.mul(g, d)] = idx
        self.order = len(reps)
        gens = group.generators
        ngen = len(gens)
        vec: dict[int, tuple[int, ...]] = {self._coset[group.identity]: (0,) * ngen}
        queue = deque([self._coset[group.identity]])
        relations = []
        while queue:
            c = queue.popleft()
            for i, s in enumerate(gens):
                target = self._coset[group.mul(reps[c], s)]
                step = tuple(v + (j == i) for j, v in enumerate(vec[c]))
                if target not in vec:
                    vec[target] = step
                    queue.append(target)
                else:
                    rel = tuple(a - b for a, b in zip(step, vec[target]))
                    if any(rel):
                        relations.append(rel)
        self._vec = vec
        self.ngens = ngen
        self.relations = relations

    def coordinates(self, g) -> tuple[int, ...]:
        return self._vec[self._coset[g]]

    def invariants(self) -> list[int]:
        return cokernel_invariants(self.relations, self.ngens)


def cokernel_invariants(rows: list[tuple[int, ...]], ncols: int) -> list[int]:
    """Invariant factors of Z^ncols / rowspace(rows); 0 stands for a copy of Z.

    Trivial factors (1) are dropped, so the trivial group gives [].
    """
    if ncols == 0:
        return []
    if not rows:
        return [0] * ncols
    diag = list(invariant_factors(Matrix(rows), domain=ZZ))
    diag += [0] * (ncols - len(diag))
    factors = [abs(int(d)) for d in diag if abs(int(d)) != 1]
    # sympy lists nonzero factors first; keep the divisibility-chain order
    return sorted(f for f in factors if f) + [0] * factors.count(0)


def primary_decomposition(invariants: list[int]) -> list[int]:
    """Prime-power cyclic factors of a finite abelian group, sorted."""
    from sympy import factorint

    out = []
    for d in invariants:
        if d == 0:
            raise ValueError("group is infinite")
        out.extend(pr ** e for pr, e in factorint(d).items())
    return sorted(out)


def abelianization(group) -> list[int]:
    return AbelianQuotient(group).invariants()
