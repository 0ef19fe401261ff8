from __future__ import annotations

from dataclasses import dataclass

from .symplectic import minimal_rank

DEFAULT_SIZE_CAP = 10**6


class SizeCapExceeded(RuntimeError):
    def __init__(self, what: str, order: int, cap: int):
        super().__init__(f"{what} has order {order}, above the size cap {cap}")
        self.what = what
        self.order = order
        self.cap = cap


@dataclass(frozen=True)
class AmalgamParameters:
    """Primes p, q and the minimal symplectic ranks m (side A) and n (side B).

    A = Q x| C_p with Q extraspecial of order q^(2m+1);
    B = P x| C_q with P extraspecial of order p^(2n+1).
    """

    p: int
    q: int
    m: int
    n: int

    @classmethod
    def from_primes(cls, p: int, q: int) -> "AmalgamParameters":
        return cls(p, q, minimal_rank(p, q), minimal_rank(q, p))

    def __post_init__(self):
        if self.m != minimal_rank(self.p, self.q) or self.n != minimal_rank(self.q, self.p):
            raise ValueError(f"(m, n) = ({self.m}, {self.n}) are not the minimal ranks for {self.p}, {self.q}")

    @property
    def orderQ(self) -> int:
        return self.q ** (2 * self.m + 1)

    @property
    def orderP(self) -> int:
        return self.p ** (2 * self.n + 1)

    @property
    def orderA(self) -> int:
        return self.p * self.orderQ

    @property
    def orderB(self) -> int:
        return self.q * self.orderP

    @property
    def orderC(self) -> int:
        return self.p * self.q

    def swapped(self) -> "AmalgamParameters":
        return AmalgamParameters(self.q, self.p, self.n, self.m)

    def check_size(self, cap: int = DEFAULT_SIZE_CAP) -> None:
        for what, order in (("A", self.orderA), ("B", self.orderB)):
            if order > cap:
                raise SizeCapExceeded(what, order, cap)

    def as_dict(self) -> dict:
        return {
            "p": self.p, "q": self.q, "m": self.m, "n": self.n,
            "orderQ": self.orderQ, "orderP": self.orderP,
            "orderA": self.orderA, "orderB": self.orderB, "orderC": self.orderC,
        }
