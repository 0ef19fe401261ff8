"""Normal-form arithmetic in X = A *_C B.

Every element of X has a unique expression ``c * t_1 * ... * t_n`` with
``c`` in C and each ``t_i`` a fixed representative of a nontrivial right
coset ``C t_i`` in A or B, consecutive letters lying in different factors.
"""
from __future__ import annotations

import hashlib
import json
import math
import random
from pathlib import Path

from ..core.local import LocalElement, LocalFactor, build_local_factor, carter_subgroup
from ..core.params import DEFAULT_SIZE_CAP, AmalgamParameters
from .words import INFINITE, AmalgamLetter, AmalgamWord

CElement = tuple[int, int]


class ContextMismatch(ValueError):
    pass


class AmalgamContext:
    """Both factors, the identification of C, and the coset transversals.

    The pairing sends z (generating Z(Q) in A) to tau^pair_q and sigma to
    w^pair_p, where w generates Z(P) and tau is the acting element of B.
    """

    def __init__(
        self,
        params: AmalgamParameters,
        factor_a: LocalFactor,
        factor_b: LocalFactor,
        seed: int = 42,
        pairing: tuple[int, int] = (1, 1),
    ):
        p, q = params.p, params.q
        pair_p, pair_q = pairing[0] % p, pairing[1] % q
        if not pair_p or not pair_q:
            raise ValueError("pairing exponents must be units")
        self.params = params
        self.seed = seed
        self.pairing = (pair_p, pair_q)
        self.factors = {"A": factor_a, "B": factor_b}
        self._pair_p_inv = pow(pair_p, -1, p)
        self._pair_q_inv = pow(pair_q, -1, q)
        self.identity = AmalgamWord((0, 0), ())

        self.carter = {s: carter_subgroup(f) for s, f in self.factors.items()}
        self._check_identification()

        self.reps: dict[str, list[LocalElement]] = {}
        self._decomp: dict[str, dict[LocalElement, tuple[CElement, int]]] = {}
        for side in "AB":
            self._build_transversal(side)
        self._build_tables()
        self.fingerprint = self._fingerprint()

    # -- identification of C ------------------------------------------------

    def c_to_side(self, c: CElement, side: str) -> LocalElement:
        i, j = c
        if side == "A":
            return self.factors["A"].c_element(central=j, acting=i)
        return self.factors["B"].c_element(central=i * self.pairing[0], acting=j * self.pairing[1])

    def c_from_side(self, g: LocalElement, side: str) -> CElement:
        if any(g.h.x):
            raise ValueError(f"{g} is not in C")
        if side == "A":
            return (g.s, g.h.c)
        p, q = self.params.p, self.params.q
        return (g.h.c * self._pair_p_inv % p, g.s * self._pair_q_inv % q)

    def c_mul(self, a: CElement, b: CElement) -> CElement:
        return ((a[0] + b[0]) % self.params.p, (a[1] + b[1]) % self.params.q)

    def c_inv(self, a: CElement) -> CElement:
        return (-a[0] % self.params.p, -a[1] % self.params.q)

    def _check_identification(self) -> None:
        p, q = self.params.p, self.params.q
        for side in "AB":
            f = self.factors[side]
            gens = [self.c_to_side((1, 0), side), self.c_to_side((0, 1), side)]
            if f.element_order(gens[0]) != p or f.element_order(gens[1]) != q:
                raise ValueError(f"identification does not match element orders on side {side}")
            if f.mul(*gens) != f.mul(*reversed(gens)):
                raise ValueError(f"images of C do not commute on side {side}")
            image = {self.c_to_side((i, j), side) for i in range(p) for j in range(q)}
            if image != self.carter[side].elements:
                raise ValueError(f"identification does not land on the Carter subgroup of {side}")

    # -- transversals ---------------------------------------------------------

    def _build_transversal(self, side: str) -> None:
        f = self.factors[side]
        cs = [((i, j), self.c_to_side((i, j), side)) for i in range(self.params.p) for j in range(self.params.q)]
        reps: list[LocalElement] = []
        table: dict[LocalElement, tuple[CElement, int]] = {}
        for g in f.elements():  # lexicographic, so g is the least element of its coset
            if g in table:
                continue
            idx = len(reps)
            reps.append(g)
            for code, c in cs:
                table[f.mul(c, g)] = (code, idx)
        if reps[0] != f.identity or len(reps) * self.params.orderC != f.order:
            raise AssertionError("transversal construction failed")
        self.reps[side] = reps
        self._decomp[side] = table

    def _build_tables(self) -> None:
        p, q = self.params.p, self.params.q
        codes = [(i, j) for i in range(p) for j in range(q)]
        self._cmul = [[((a[0] + b[0]) % p) * q + (a[1] + b[1]) % q for b in codes] for a in codes]
        self._push: dict[str, list[list[tuple[int, int]]]] = {}
        self._inv: dict[str, list[tuple[int, int]]] = {}
        self._merge_cache: dict[tuple[str, int, int], tuple[CElement, int]] = {}
        for side in "AB":
            f, table = self.factors[side], self._decomp[side]
            images = [self.c_to_side(c, side) for c in codes]
            push, inv = [], []
            for rep in self.reps[side]:
                row = []
                for img in images:
                    c, idx = table[f.mul(rep, img)]
                    row.append((c[0] * q + c[1], idx))
                push.append(row)
                c, idx = table[f.inv(rep)]
                inv.append((c[0] * q + c[1], idx))
            self._push[side] = push
            self._inv[side] = inv

    def transversal_size(self, side: str) -> int:
        return len(self.reps[side])

    def coset_decompose(self, g: LocalElement, side: str) -> tuple[CElement, LocalElement]:
        """g = c * rep with rep the stored representative of C g."""
        c, idx = self._decomp[side][g]
        return c, self.reps[side][idx]

    def _fingerprint(self) -> str:
        payload = {
            "params": [self.params.p, self.params.q, self.params.m, self.params.n],
            "seed": self.seed,
            "pairing": list(self.pairing),
            "matrices": {s: [list(r) for r in f.matrix] for s, f in self.factors.items()},
            "transversals": {s: [[list(g.h.x), g.h.c, g.s] for g in self.reps[s]] for s in "AB"},
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    # -- words ----------------------------------------------------------------

    def letter_element(self, letter: AmalgamLetter) -> LocalElement:
        return self.reps[letter.f][letter.r]

    def embed(self, g: LocalElement, side: str) -> AmalgamWord:
        c, idx = self._decomp[side][g]
        if idx == 0:
            return AmalgamWord(c, ())
        return AmalgamWord(c, (AmalgamLetter(side, idx),))

    def from_c(self, c: CElement) -> AmalgamWord:
        return AmalgamWord((c[0] % self.params.p, c[1] % self.params.q), ())

    def _push_left(self, letters: list[AmalgamLetter], c: CElement) -> CElement:
        """Rewrite letters * c as c' * letters' in place; return c'."""
        if c == (0, 0):
            return c
        q = self.params.q
        code = c[0] * q + c[1]
        for i in range(len(letters) - 1, -1, -1):
            side, idx = letters[i]
            code, idx = self._push[side][idx][code]
            letters[i] = AmalgamLetter(side, idx)
        return divmod(code, q)

    def _merge(self, side: str, i1: int, i2: int) -> tuple[CElement, int]:
        """rep_i1 * rep_i2 = c * rep_idx."""
        key = (side, i1, i2)
        hit = self._merge_cache.get(key)
        if hit is None:
            reps = self.reps[side]
            hit = self._decomp[side][self.factors[side].mul(reps[i1], reps[i2])]
            self._merge_cache[key] = hit
        return hit

    def multiply(self, w1: AmalgamWord, w2: AmalgamWord) -> AmalgamWord:
        left = list(w1.letters)
        prefix = self.c_mul(w1.c, self._push_left(left, w2.c))
        right = w2.letters
        k = 0
        while left and k < len(right) and left[-1].f == right[k].f:
            side = right[k].f
            c, idx = self._merge(side, left.pop().r, right[k].r)
            k += 1
            prefix = self.c_mul(prefix, self._push_left(left, c))
            if idx:
                left.append(AmalgamLetter(side, idx))
                break
        if k == len(right):
            return AmalgamWord(prefix, tuple(left))
        return AmalgamWord(prefix, tuple(left) + right[k:])

    def inverse(self, w: AmalgamWord) -> AmalgamWord:
        q = self.params.q
        p = self.params.p
        carry = (-w.c[0] % p) * q + (-w.c[1] % q)
        out = []
        for side, idx in w.letters:
            c1, idx1 = self._inv[side][idx]  # rep^-1 = c1 rep_idx1
            c2, idx2 = self._push[side][idx1][carry]
            carry = self._cmul[c1][c2]
            out.append(AmalgamLetter(side, idx2))
        out.reverse()
        return AmalgamWord(divmod(carry, q), tuple(out))

    def product(self, *words: AmalgamWord) -> AmalgamWord:
        result = self.identity
        for w in words:
            result = self.multiply(result, w)
        return result

    def conjugate(self, g: AmalgamWord, x: AmalgamWord) -> AmalgamWord:
        """g^x = x^-1 g x."""
        return self.multiply(self.multiply(self.inverse(x), g), x)

    def commutator(self, a: AmalgamWord, b: AmalgamWord) -> AmalgamWord:
        return self.product(self.inverse(a), self.inverse(b), a, b)

    def power(self, w: AmalgamWord, k: int) -> AmalgamWord:
        if k < 0:
            w, k = self.inverse(w), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.multiply(result, w)
            w = self.multiply(w, w)
            k >>= 1
        return result

    def equals(self, a: AmalgamWord, b: AmalgamWord) -> bool:
        return a == b

    def commute(self, a: AmalgamWord, b: AmalgamWord) -> bool:
        return self.multiply(a, b) == self.multiply(b, a)

    def in_c(self, w: AmalgamWord) -> bool:
        return not w.letters

    def in_factor(self, w: AmalgamWord, side: str) -> bool:
        return not w.letters or (len(w.letters) == 1 and w.letters[0].f == side)

    def to_factor(self, w: AmalgamWord, side: str | None = None) -> tuple[str, LocalElement]:
        """The factor element represented by a word with at most one letter."""
        if len(w.letters) > 1:
            raise ValueError("word does not lie in a factor")
        if w.letters:
            side = w.letters[0].f
        side = side or "A"
        f = self.factors[side]
        g = self.c_to_side(w.c, side)
        if w.letters:
            g = f.mul(g, self.letter_element(w.letters[0]))
        return side, g

    def cyclic_reduce(self, w: AmalgamWord) -> tuple[AmalgamWord, AmalgamWord]:
        """Return (core, conjugator) with w = conjugator^-1 core conjugator, core cyclically reduced."""
        core, conj = w, self.identity
        while len(core.letters) >= 2 and core.letters[0].f == core.letters[-1].f:
            t = AmalgamWord((0, 0), (core.letters[-1],))
            core = self.multiply(self.multiply(t, core), self.inverse(t))
            conj = self.multiply(t, conj)
        return core, conj

    def c_order(self, c: CElement) -> int:
        p, q = self.params.p, self.params.q
        return math.lcm(p // math.gcd(c[0], p), q // math.gcd(c[1], q))

    def element_order(self, w: AmalgamWord):
        """Order of w in X, or INFINITE when its cyclic core has two or more letters."""
        core, _ = self.cyclic_reduce(w)
        if len(core.letters) >= 2:
            return INFINITE
        if not core.letters:
            return self.c_order(core.c)
        side, g = self.to_factor(core)
        return self.factors[side].element_order(g)

    def random_word(self, length: int, rng: random.Random | int) -> AmalgamWord:
        """Uniform C-part, uniform starting factor, uniform nontrivial cosets."""
        if length < 0:
            raise ValueError("length must be nonnegative")
        if not isinstance(rng, random.Random):
            rng = random.Random(rng)
        c = (rng.randrange(self.params.p), rng.randrange(self.params.q))
        side = rng.choice("AB")
        letters = []
        for _ in range(length):
            letters.append(AmalgamLetter(side, rng.randrange(1, len(self.reps[side]))))
            side = "B" if side == "A" else "A"
        return AmalgamWord(c, tuple(letters))

    # -- serialization --------------------------------------------------------

    def word_to_json(self, w: AmalgamWord) -> dict:
        return {
            "c": list(w.c),
            "letters": [{"f": l.f, "r": l.r} for l in w.letters],
            "fingerprint": self.fingerprint,
        }

    def word_from_json(self, data: dict) -> AmalgamWord:
        fp = data.get("fingerprint")
        if fp is not None and fp != self.fingerprint:
            raise ContextMismatch(f"word was built for context {fp}, this context is {self.fingerprint}")
        i, j = data.get("c", [0, 0])
        letters = []
        for item in data.get("letters", []):
            side, idx = item["f"], int(item["r"])
            if side not in self.reps:
                raise ValueError(f"unknown factor tag {side!r}")
            if not 0 <= idx < len(self.reps[side]):
                raise ValueError(f"transversal index {idx} out of range for {side}")
            letters.append(AmalgamLetter(side, idx))
        # Accept any letter sequence and normalize it.
        w = self.from_c((int(i), int(j)))
        for letter in letters:
            w = self.multiply(w, self.embed(self.letter_element(letter), letter.f))
        return w


def build_context(
    params: AmalgamParameters,
    seed: int = 42,
    cache_dir: str | Path | None = None,
    size_cap: int = DEFAULT_SIZE_CAP,
    pairing: tuple[int, int] = (1, 1),
) -> AmalgamContext:
    params.check_size(size_cap)
    fa = build_local_factor(params, "A", seed, cache_dir, size_cap)
    fb = build_local_factor(params, "B", seed, cache_dir, size_cap)
    return AmalgamContext(params, fa, fb, seed, pairing)
