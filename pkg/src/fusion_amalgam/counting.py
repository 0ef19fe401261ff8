"""Exact element count behind the non-existence of a finite group with the same local data.

For a finite G with Sylow subgroups P, Q, a self-normalizing C = Z(P) x Z(Q)
and trivial-intersection normalizers A = PZ(Q), B = QZ(P), the fractions of
|G| made up of non-identity p-elements, non-identity q-elements and elements
of order pq add up to more than 1.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime, primerange

from .amalgam.euler import euler_characteristic
from .core.params import AmalgamParameters


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class CountingInstance:
    p: int
    q: int
    sizeP: int
    sizeQ: int
    allow_even: bool = field(default=False, compare=False)

    def __post_init__(self):
        for v in (self.p, self.q):
            if not isprime(v):
                raise ValueError(f"{v} is not prime")
            if v == 2 and not self.allow_even:
                raise ValueError("p and q must be odd (pass allow_even=True for a control)")
        if self.p == self.q:
            raise ValueError("p and q must be distinct")
        for size, r, name in ((self.sizeP, self.p, "sizeP"), (self.sizeQ, self.q, "sizeQ")):
            if size < r**3 or not _is_power_of(size, r):
                raise ValueError(f"{name}={size} must be a power of {r} that is at least {r}^3")

    @classmethod
    def from_params(cls, params: AmalgamParameters) -> "CountingInstance":
        return cls(params.p, params.q, params.orderP, params.orderQ)

    @property
    def odd(self) -> bool:
        return self.p % 2 == 1 and self.q % 2 == 1


@dataclass(frozen=True)
class AccountedFraction:
    p_elements: Fraction
    q_elements: Fraction
    pq_elements: Fraction

    @property
    def total(self) -> Fraction:
        return self.p_elements + self.q_elements + self.pq_elements


def accounted_fraction(inst: CountingInstance) -> AccountedFraction:
    """Fractions of |G| counted by the argument.

    p-elements: [G:A](|P| - 1)/|G| with |A| = q|P|;
    q-elements: [G:B](|Q| - 1)/|G| with |B| = p|Q|;
    order pq: at least (p - 1)(q - 1)/(pq).
    """
    p, q = inst.p, inst.q
    p_part = Fraction(inst.sizeP - 1, q * inst.sizeP)
    q_part = Fraction(inst.sizeQ - 1, p * inst.sizeQ)
    pq_part = Fraction((p - 1) * (q - 1), p * q)
    return AccountedFraction(p_part, q_part, pq_part)


def bracket_value(inst: CountingInstance) -> Fraction:
    """1 + 1/(pq) - 1/(q|P|) - 1/(p|Q|), the simplified sum."""
    p, q = inst.p, inst.q
    return 1 + Fraction(1, p * q) - Fraction(1, q * inst.sizeP) - Fraction(1, p * inst.sizeQ)


def check_contradiction(inst: CountingInstance) -> tuple[bool, Fraction]:
    excess = accounted_fraction(inst).total - 1
    return excess > 0, excess


def excess_equals_minus_chi(params: AmalgamParameters) -> bool:
    _, excess = check_contradiction(CountingInstance.from_params(params))
    return excess == -euler_characteristic(params)


def grid_sweep(max_prime: int = 97, max_exponent: int = 9, minimal_only: bool = False) -> list[dict]:
    """Every odd prime pair p != q <= max_prime, sizes p^a, q^b with 3 <= a, b <= max_exponent."""
    rows = []
    primes = list(primerange(3, max_prime + 1))
    exps = [3] if minimal_only else list(range(3, max_exponent + 1))
    for p in primes:
        for q in primes:
            if p == q:
                continue
            for a in exps:
                for b in exps:
                    inst = CountingInstance(p, q, p**a, q**b)
                    ok, excess = check_contradiction(inst)
                    rows.append({
                        "p": p, "q": q, "sizeP": inst.sizeP, "sizeQ": inst.sizeQ,
                        "excess_num": excess.numerator, "excess_den": excess.denominator,
                        "verdict": ok,
                    })
    return rows


COLUMNS = ("p", "q", "sizeP", "sizeQ", "excess_num", "excess_den", "verdict")


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=None)
