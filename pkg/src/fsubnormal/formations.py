"""Formations as named membership predicates, and formation residuals."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import FormationViolation, UnknownFormation
from .permgroup import GroupLike, Subgroup, as_subgroup, quotient
from .primes import ALL_PRIMES, PrimeSet
from .structure import (
    arithmetic_length,
    derived_subgroup,
    is_nilpotent,
    is_soluble,
    is_supersoluble,
    nilpotent_length,
    normal_subgroups,
    pi,
)

__all__ = ["FormationSpec", "builtin", "parse_formation", "residual", "BUILTIN_TOKENS"]


@dataclass(frozen=True, eq=False)
class FormationSpec:
    """A class of groups given by a predicate plus metadata.

    ``hereditary`` and ``saturated`` are declared, not proven; the harness
    checks them on its corpus.  ``name`` doubles as the cache key for
    membership answers, so distinct predicates need distinct names.
    """

    name: str
    member: Callable[[Subgroup], bool]
    support: PrimeSet = ALL_PRIMES
    hereditary: bool = False
    saturated: bool = False
    provenance: str = "user"

    def contains(self, G: GroupLike) -> bool:
        G = as_subgroup(G)
        return G.parent.cached(("member", self.name, G.mask), lambda: bool(self.member(G)))

    def __contains__(self, G: GroupLike) -> bool:
        return self.contains(G)

    def restricted(self, primes: PrimeSet) -> "FormationSpec":
        """The pi-groups of this class."""
        base = self
        return FormationSpec(
            name=f"{self.name}@{primes.token()}",
            member=lambda G: primes.issuperset(pi(G)) and base.contains(G),
            support=self.support & primes,
            hereditary=self.hereditary,
            saturated=self.saturated,
            provenance=self.provenance,
        )

    def __repr__(self) -> str:
        return f"FormationSpec({self.name!r}, support={self.support.token()})"


def _nilpotent_length_at_most(k: int):
    return lambda G: is_soluble(G) and nilpotent_length(G) <= k


def _arith_length_at_most(n: int):
    return lambda G: is_soluble(G) and arithmetic_length(G) <= n


def _na(G: Subgroup) -> bool:
    return is_nilpotent(derived_subgroup(G))


_FIXED = {
    "all": (lambda G: True, "all"),
    "soluble": (is_soluble, "soluble"),
    "nilpotent": (is_nilpotent, "nilpotent"),
    "NA": (_na, "NA"),
    "supersoluble": (is_supersoluble, "supersoluble"),
}
_ALIASES = {"G": "all", "S": "soluble", "N": "nilpotent", "U": "supersoluble", "metanilpotent": "N^2"}

BUILTIN_TOKENS = ("all", "soluble", "nilpotent", "N^k", "NA", "supersoluble", "La(n)")


def builtin(name: str, param: int | None = None, primes: PrimeSet | None = None) -> FormationSpec:
    """A builtin formation: ``all``, ``soluble``, ``nilpotent``, ``nilpotent-length`` (param k),
    ``NA``, ``supersoluble`` or ``La`` (param n).  ``primes`` restricts to pi-groups.

    Every builtin is hereditary and saturated.
    """
    name = _ALIASES.get(name, name)
    if name in _FIXED:
        pred, label = _FIXED[name]
    elif name in ("nilpotent-length", "N^"):
        if param is None or param < 1:
            raise UnknownFormation("nilpotent-length needs k >= 1")
        pred, label = _nilpotent_length_at_most(param), f"N^{param}"
    elif name in ("La", "arithmetic-length"):
        if param is None or param < 1:
            raise UnknownFormation("La needs n >= 1")
        pred, label = _arith_length_at_most(param), f"La({param})"
    else:
        raise UnknownFormation(f"unknown formation {name!r}")
    if label == "N^1":
        pred, label = is_nilpotent, "nilpotent"
    spec = FormationSpec(label, pred, ALL_PRIMES, hereditary=True, saturated=True, provenance="builtin")
    return spec.restricted(primes) if primes is not None else spec


_TOKEN = re.compile(r"^(?P<base>[A-Za-z\-]+)(?:\^(?P<k>\d+)|\((?P<n>\d+)\))?(?:@(?P<pi>\{?[\d,\s]*\}?|all))?$")


def parse_formation(token: str) -> FormationSpec:
    """Parse a formation token such as ``supersoluble``, ``N^3``, ``La(1)`` or ``NA@{2,3}``."""
    m = _TOKEN.match(token.strip())
    if not m:
        raise UnknownFormation(f"cannot parse formation {token!r}")
    base, k, n, pi_tok = m["base"], m["k"], m["n"], m["pi"]
    primes = PrimeSet.parse(pi_tok) if pi_tok else None
    if k is not None:
        if base != "N":
            raise UnknownFormation(f"cannot parse formation {token!r}")
        return builtin("nilpotent-length", int(k), primes)
    if n is not None:
        if base != "La":
            raise UnknownFormation(f"cannot parse formation {token!r}")
        return builtin("La", int(n), primes)
    if _ALIASES.get(base, base) == "N^2":
        return builtin("nilpotent-length", 2, primes)
    return builtin(base, None, primes)


def residual(F: FormationSpec, G: GroupLike) -> Subgroup:
    """G^F: the intersection of all normal N with G/N in F.

    Normal subgroups are scanned bottom-up, skipping any that contain an
    accepted one (it cannot shrink the intersection).  The result is checked
    by testing G/G^F itself; failure means ``F`` is not a formation on G.
    """
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        if F.contains(G):
            return parent.trivial
        accepted: list[Subgroup] = []
        mask = G.mask
        for N in normal_subgroups(G):
            if any(A <= N for A in accepted):
                continue
            if F.contains(quotient(G, N).group):
                accepted.append(N)
                mask &= N.mask
        R = Subgroup(parent, mask)
        if not F.contains(quotient(G, R).group):
            raise FormationViolation(f"{F.name}: G/R not in the class for the intersection R of accepted kernels")
        return R

    return parent.cached(("residual", F.name, G.mask), compute)
