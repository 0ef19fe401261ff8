"""Symplectic matrices over prime fields and the search for acting elements.

Vectors are row vectors; a matrix ``M`` acts by ``x -> x M``.  The form is
``omega(x, y) = sum_i x_i y_{k+i} - x_{k+i} y_i`` on ``F_r^{2k}``.
"""
from __future__ import annotations

import json
import logging
import os
import random
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from sympy import isprime

log = logging.getLogger(__name__)

Matrix = tuple[tuple[int, ...], ...]


class SearchError(RuntimeError):
    pass


def _check_prime(r: int, name: str = "r") -> None:
    if not isinstance(r, int) or not isprime(r):
        raise ValueError(f"{name}={r!r} is not a prime")


def sp_order(k: int, r: int) -> int:
    """Order of Sp(2k, r): r^(k^2) * prod_{i=1..k} (r^(2i) - 1)."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"rank k must be a positive integer, got {k!r}")
    _check_prime(r)
    order = r ** (k * k)
    for i in range(1, k + 1):
        order *= r ** (2 * i) - 1
    return order


def minimal_rank(p: int, q: int) -> int:
    """Smallest m >= 1 such that p divides |Sp(2m, q)|."""
    for name, v in (("p", p), ("q", q)):
        _check_prime(v, name)
        if v == 2:
            raise ValueError(f"{name} must be odd")
    if p == q:
        raise ValueError("p and q must be distinct")
    # p | q^(2m) - 1 for m = p - 1 at the latest (Fermat), so the loop ends.
    m = 1
    while sp_order(m, q) % p:
        m += 1
    return m


# -- plain matrix arithmetic mod r ------------------------------------------

def identity(dim: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))


def mat_mul(a: Matrix, b: Matrix, r: int) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % r for col in cols) for row in a)


def mat_pow(a: Matrix, e: int, r: int) -> Matrix:
    result = identity(len(a))
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base, r)
        base = mat_mul(base, base, r)
        e >>= 1
    return result


def vec_mat(x: Sequence[int], m: Matrix, r: int) -> tuple[int, ...]:
    dim = len(x)
    return tuple(sum(x[i] * m[i][j] for i in range(dim)) % r for j in range(dim))


def omega(x: Sequence[int], y: Sequence[int], r: int) -> int:
    k = len(x) // 2
    return sum(x[i] * y[k + i] - x[k + i] * y[i] for i in range(k)) % r


def is_symplectic(m: Matrix, r: int) -> bool:
    dim = len(m)
    basis = identity(dim)
    images = [vec_mat(e, m, r) for e in basis]
    return all(
        omega(images[i], images[j], r) == omega(basis[i], basis[j], r)
        for i in range(dim)
        for j in range(i + 1, dim)
    )


def fixed_space_dim(m: Matrix, r: int) -> int:
    """Dimension of {v : v M = v}, via rank of M - I over F_r."""
    dim = len(m)
    rows = [[(m[i][j] - (i == j)) % r for j in range(dim)] for i in range(dim)]
    rank = 0
    for col in range(dim):
        pivot = next((i for i in range(rank, dim) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, r)
        rows[rank] = [v * inv % r for v in rows[rank]]
        for i in range(dim):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(v - f * w) % r for v, w in zip(rows[i], rows[rank])]
        rank += 1
    return dim - rank


def certify(m: Matrix, a: int, r: int) -> None:
    """Raise if ``m`` is not a fixed-point-free symplectic element of order a."""
    dim = len(m)
    if any(len(row) != dim for row in m) or dim % 2:
        raise SearchError("matrix must be square of even size")
    if not is_symplectic(m, r):
        raise SearchError("matrix does not preserve the alternating form")
    if m == identity(dim) or mat_pow(m, a, r) != identity(dim):
        raise SearchError(f"matrix does not have order {a}")
    if fixed_space_dim(m, r):
        raise SearchError("matrix has a nonzero fixed vector")


def _transvection(v: Sequence[int], lam: int, r: int) -> Matrix:
    # x -> x + lam * omega(x, v) * v
    k = len(v) // 2
    jv = [v[k + i] for i in range(k)] + [-v[i] for i in range(k)]  # omega(e_i, v)
    return tuple(
        tuple((int(i == j) + lam * jv[i] * v[j]) % r for j in range(2 * k)) for i in range(2 * k)
    )


def _search_small(a: int, r: int, rng: random.Random) -> Matrix:
    candidates = []
    for a11 in range(r):
        for a12 in range(r):
            for a21 in range(r):
                for a22 in range(r):
                    if (a11 * a22 - a12 * a21) % r != 1:
                        continue
                    m = ((a11, a12), (a21, a22))
                    if m != identity(2) and mat_pow(m, a, r) == identity(2):
                        candidates.append(m)
    if not candidates:
        raise SearchError(f"no element of order {a} in SL(2, {r})")
    return rng.choice(candidates)


def _search_random(a: int, r: int, k: int, rng: random.Random, budget: int) -> Matrix:
    dim = 2 * k
    order = sp_order(k, r)
    cofactor = order
    while cofactor % a == 0:
        cofactor //= a
    for _ in range(budget):
        m = identity(dim)
        for _ in range(4 * dim):
            v = [rng.randrange(r) for _ in range(dim)]
            if not any(v):
                continue
            m = mat_mul(m, _transvection(v, rng.randrange(1, r), r), r)
        # m^cofactor has a-power order; climb down to order exactly a
        g = mat_pow(m, cofactor, r)
        if g == identity(dim):
            continue
        while True:
            nxt = mat_pow(g, a, r)
            if nxt == identity(dim):
                break
            g = nxt
        if fixed_space_dim(g, r) == 0:
            return g
    raise SearchError(f"no order-{a} element of Sp({dim}, {r}) found in {budget} tries")


def default_cache_dir() -> Path:
    env = os.environ.get("FUSION_AMALGAM_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "fusion_amalgam"


def _cache_path(cache_dir: Path, a: int, r: int, k: int, seed: int) -> Path:
    return Path(cache_dir) / f"sp_a{a}_r{r}_k{k}_s{seed}.json"


def _load_cached(path: Path, a: int, r: int, k: int) -> Matrix | None:
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if (data.get("a"), data.get("r"), data.get("k")) != (a, r, k):
        return None
    m = tuple(tuple(int(v) % r for v in row) for row in data["matrix"])
    try:
        certify(m, a, r)
    except SearchError:
        log.warning("discarding invalid cached matrix %s", path)
        return None
    return m


def _store_cached(path: Path, a: int, r: int, k: int, seed: int, m: Matrix) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(f".tmp{os.getpid()}")
    tmp.write_text(json.dumps({"a": a, "r": r, "k": k, "seed": seed, "matrix": [list(row) for row in m]}))
    os.replace(tmp, path)


@lru_cache(maxsize=None)
def _find_in_memory(a: int, r: int, k: int, seed: int, budget: int) -> Matrix:
    rng = random.Random(f"acting:{a}:{r}:{k}:{seed}")
    if k == 1:
        m = _search_small(a, r, rng)
    else:
        m = _search_random(a, r, k, rng, budget)
    certify(m, a, r)
    return m


def find_acting_matrix(
    a: int,
    r: int,
    k: int,
    seed: int = 42,
    cache_dir: str | Path | None = None,
    budget: int = 10_000,
) -> Matrix:
    """Find a fixed-point-free symplectic matrix of prime order ``a`` in Sp(2k, r).

    The choice is deterministic in ``seed``.  With ``cache_dir`` set, the
    matrix is read from / written to a JSON file there; cached matrices are
    re-certified on load.
    """
    _check_prime(a, "a")
    _check_prime(r, "r")
    if a == r:
        raise ValueError("acting prime must differ from the field characteristic")
    if sp_order(k, r) % a:
        raise ValueError(f"{a} does not divide |Sp({2 * k}, {r})|")
    path = None
    if cache_dir is not None:
        path = _cache_path(Path(cache_dir), a, r, k, seed)
        cached = _load_cached(path, a, r, k)
        if cached is not None:
            return cached
    m = _find_in_memory(a, r, k, seed, budget)
    if path is not None:
        _store_cached(path, a, r, k, seed, m)
    return m
