from __future__ import annotations

from typing import NamedTuple


class AmalgamLetter(NamedTuple):
    """A nontrivial right-coset representative of C in factor ``f`` ("A" or "B")."""

    f: str
    r: int


class AmalgamWord(NamedTuple):
    """Normal form c * t_1 * ... * t_n.

    ``c = (i, j)`` encodes sigma^i z^j on side A (the same element is
    w^i tau^j on side B under the default pairing); the letters alternate
    between the factors.
    """

    c: tuple[int, int]
    letters: tuple[AmalgamLetter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)


class _Infinite:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"

    def __str__(self) -> str:
        return "infinite"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()
