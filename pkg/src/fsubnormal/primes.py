"""Prime sets and the little bits of integer arithmetic the group code needs."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from sympy import factorint, isprime

__all__ = ["PrimeSet", "ALL_PRIMES", "prime_divisors", "is_prime", "pi_part", "is_pi_number"]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


@lru_cache(maxsize=None)
def prime_divisors(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    return tuple(sorted(factorint(n)))


@dataclass(frozen=True)
class PrimeSet:
    """Either every prime (``primes is None``) or an explicit finite set of primes."""

    primes: frozenset[int] | None = None

    def __post_init__(self):
        if self.primes is not None:
            object.__setattr__(self, "primes", frozenset(int(p) for p in self.primes))
            bad = sorted(p for p in self.primes if not is_prime(p))
            if bad:
                raise ValueError(f"not primes: {bad}")

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(frozenset(primes))

    @classmethod
    def parse(cls, text: str) -> "PrimeSet":
        """Accepts ``all``, ``2,3,5`` or ``{2,3,5}``; the empty braces give the empty set."""
        t = text.strip()
        if t.lower() in ("all", "p", "*"):
            return ALL_PRIMES
        t = t.strip("{}")
        if not t.strip():
            return cls(frozenset())
        parts = [s for s in re.split(r"[,\s]+", t) if s]
        try:
            return cls(frozenset(int(s) for s in parts))
        except ValueError as exc:
            raise ValueError(f"bad prime set {text!r}: {exc}") from None

    @property
    def is_all(self) -> bool:
        return self.primes is None

    def __contains__(self, p: int) -> bool:
        return self.primes is None or p in self.primes

    def __and__(self, other: "PrimeSet") -> "PrimeSet":
        if self.primes is None:
            return other
        if other.primes is None:
            return self
        return PrimeSet(self.primes & other.primes)

    def restrict(self, primes: Iterable[int]) -> tuple[int, ...]:
        """The members of ``primes`` lying in this set, sorted."""
        return tuple(sorted(p for p in primes if p in self))

    def issuperset(self, primes: Iterable[int]) -> bool:
        return all(p in self for p in primes)

    def issubset(self, other: "PrimeSet") -> bool:
        if other.primes is None:
            return True
        if self.primes is None:
            return False
        return self.primes <= other.primes

    def token(self) -> str:
        if self.primes is None:
            return "all"
        return "{" + ",".join(str(p) for p in sorted(self.primes)) + "}"

    def __str__(self) -> str:
        return self.token()


ALL_PRIMES = PrimeSet(None)


def pi_part(n: int, primes: PrimeSet) -> int:
    """Largest divisor of ``n`` whose prime divisors all lie in ``primes``."""
    out = 1
    for p, e in factorint(n).items():
        if p in primes:
            out *= p**e
    return out


def is_pi_number(n: int, primes: PrimeSet) -> bool:
    return all(p in primes for p in prime_divisors(n))
