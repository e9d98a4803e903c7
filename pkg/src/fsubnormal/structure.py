"""Structural invariants of finite permutation groups.

All functions accept a :class:`~fsubnormal.permgroup.PermGroup` or a
:class:`~fsubnormal.permgroup.Subgroup` (treated as a group in its own right)
and cache their answers on the parent group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NotFound, NotPSoluble, NotSoluble, SubgroupNotContained
from .permgroup import (
    GroupLike,
    Subgroup,
    _close,
    _extend,
    _mask_from_flags,
    _mask_from_indices,
    _require_sub,
    _element_orders,
    as_subgroup,
    conjugate,
    generate,
    is_normal,
    join,
    maximal_subgroups,
    normal_closure,
    normalizer,
    product_set,
)
from .primes import ALL_PRIMES, PrimeSet, is_pi_number, is_prime, pi_part, prime_divisors

__all__ = [
    "SeriesReport",
    "pi",
    "conjugacy_classes",
    "normal_subgroups",
    "minimal_normal_subgroups",
    "is_abelian",
    "derived_subgroup",
    "derived_series",
    "is_soluble",
    "is_p_group",
    "is_pi_group",
    "is_nilpotent",
    "sylow",
    "sylow_subgroups",
    "hall",
    "o_pi",
    "o_pi_over",
    "upper_p_series",
    "p_length",
    "p_nilpotent_radical",
    "fitting",
    "fitting_series",
    "nilpotent_length",
    "frattini",
    "chief_series",
    "chief_factors",
    "factor_centralizer",
    "arithmetic_length",
    "is_supersoluble",
]


@dataclass
class SeriesReport:
    """A normal series of a group.

    ``terms`` run from the bottom (trivial) to the top for ascending kinds
    (fitting, chief, upper-p) and from the group down to the last derived
    subgroup for ``kind="derived"``; ``labels[i]`` describes the step from
    ``terms[i]`` to ``terms[i + 1]``.
    """

    kind: str
    terms: list[Subgroup]
    labels: list[str] = field(default_factory=list)

    @property
    def length(self) -> int:
        if self.kind == "upper-p":
            return sum(1 for lab in self.labels if lab == "p")
        return len(self.terms) - 1

    def factor_orders(self) -> list[int]:
        if self.kind == "derived":
            return [a.order // b.order for a, b in zip(self.terms, self.terms[1:])]
        return [b.order // a.order for a, b in zip(self.terms, self.terms[1:])]


def pi(G: GroupLike) -> tuple[int, ...]:
    """Prime divisors of |G|."""
    return prime_divisors(as_subgroup(G).order)


def _orders(G: Subgroup) -> np.ndarray:
    parent = G.parent
    return parent.cached(("element_orders",), lambda: _element_orders(parent))


# classes and normal subgroups --------------------------------------------------


def conjugacy_classes(G: GroupLike) -> list[np.ndarray]:
    """Conjugacy classes as sorted arrays of element indices, ordered by least member."""
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        gidx = G.indices
        left = G.member_flags
        out = []
        for x in gidx:
            if not left[x]:
                continue
            cls = np.unique(parent.conj(int(x), gidx))
            left[cls] = False
            out.append(cls)
        return tuple(out)

    return list(parent.cached(("classes", G.mask), compute))


def normal_subgroups(G: GroupLike) -> list[Subgroup]:
    """Every normal subgroup of G, sorted by (order, members)."""
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        # normal closures of single classes generate the lattice under joins
        blocks = {}
        for cls in conjugacy_classes(G):
            if cls[0] == 0:
                continue
            seed = np.zeros(parent.order, dtype=bool)
            seed[0] = True
            B = Subgroup(parent, _mask_from_flags(_close(parent, seed, cls)))
            blocks.setdefault(B.mask, B)
        blocks = sorted(blocks.values(), key=Subgroup.sort_key)
        found = {1: parent.trivial}
        queue = [parent.trivial]
        while queue:
            N = queue.pop()
            for B in blocks:
                if B.mask & ~N.mask == 0:
                    continue
                J = _extend(N, B.gens)
                if J.mask not in found:
                    found[J.mask] = J
                    queue.append(J)
        return tuple(sorted(found.values(), key=Subgroup.sort_key))

    return list(parent.cached(("normal", G.mask), compute))


def minimal_normal_subgroups(G: GroupLike) -> list[Subgroup]:
    G = as_subgroup(G)
    nontrivial = [N for N in normal_subgroups(G) if not N.is_trivial()]
    return [N for N in nontrivial if not any(M < N for M in nontrivial)]


# commutators and solubility -------------------------------------------------------


def is_abelian(G: GroupLike) -> bool:
    G = as_subgroup(G)
    g = np.array(G.gens, dtype=np.int64)
    if g.size < 2:
        return True
    P = G.parent
    return bool((P.mul(g[:, None], g[None, :]) == P.mul(g[None, :], g[:, None])).all())


def derived_subgroup(G: GroupLike) -> Subgroup:
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        g = np.array(G.gens, dtype=np.int64)
        if g.size < 2:
            return parent.trivial
        inv = parent.inv
        comms = parent.mul(parent.mul(inv[g][:, None], inv[g][None, :]), parent.mul(g[:, None], g[None, :]))
        return normal_closure(G, np.unique(comms))

    return parent.cached(("derived", G.mask), compute)


def derived_series(G: GroupLike) -> SeriesReport:
    """G = G^(0) > G^(1) > ... down to the first repeated term."""
    G = as_subgroup(G)
    terms = [G]
    while True:
        D = derived_subgroup(terms[-1])
        if D == terms[-1]:
            break
        terms.append(D)
    return SeriesReport("derived", terms, ["derived"] * (len(terms) - 1))


def is_soluble(G: GroupLike) -> bool:
    G = as_subgroup(G)
    return G.parent.cached(("soluble", G.mask), lambda: derived_series(G).terms[-1].is_trivial())


def is_pi_group(G: GroupLike, primes: PrimeSet) -> bool:
    return is_pi_number(as_subgroup(G).order, primes)


def is_p_group(G: GroupLike) -> bool:
    return len(pi(G)) <= 1


def is_nilpotent(G: GroupLike) -> bool:
    """A group is nilpotent iff each Sylow subgroup is normal, i.e. for every p
    the p-elements number exactly |G|_p."""
    G = as_subgroup(G)

    def compute():
        orders = _orders(G)[G.indices].astype(np.int64)
        for p in pi(G):
            rest = orders.copy()
            while True:
                step = rest % p == 0
                if not step.any():
                    break
                rest[step] //= p
            if int((rest == 1).sum()) != pi_part(G.order, PrimeSet.of([p])):
                return False
        return True

    return G.parent.cached(("nilpotent", G.mask), compute)


# Sylow and Hall ---------------------------------------------------------------------


def sylow(G: GroupLike, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown from 1 by normalizer ascent.

    At each step the first element (canonical order) x of N_G(P) \\ P with
    x^p in P is adjoined; such x exists while P is not yet Sylow.
    """
    G = as_subgroup(G)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    parent = G.parent

    def compute():
        target = pi_part(G.order, PrimeSet.of([p]))
        P = parent.trivial
        while P.order < target:
            N = normalizer(G, P).indices
            pw = N.copy()
            for _ in range(p - 1):
                pw = parent.mul(pw, N)
            ok = P.member_flags[pw] & ~P.member_flags[N]
            x = int(N[np.argmax(ok)])
            P = _extend(P, [x])
        return P

    return parent.cached(("sylow", G.mask, p), compute)


def sylow_subgroups(G: GroupLike, p: int) -> list[Subgroup]:
    """All Sylow p-subgroups of G, in canonical order."""
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        P = sylow(G, p)
        seen = {}
        for g in G.indices:
            Q = conjugate(P, int(g))
            seen.setdefault(Q.mask, Q)
        return tuple(sorted(seen.values(), key=Subgroup.sort_key))

    return list(parent.cached(("sylows", G.mask, p), compute))


def hall(G: GroupLike, primes: PrimeSet) -> Subgroup:
    """A Hall pi-subgroup of a soluble group.

    Built prime by prime: a Hall sigma-subgroup H is extended by the first
    Sylow p-subgroup Q with HQ a subgroup.  In soluble groups this never
    gets stuck; otherwise :class:`NotFound` may be raised even if a Hall
    subgroup exists.
    """
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        H = parent.trivial
        for p in primes.restrict(pi(G)):
            for Q in sylow_subgroups(G, p):
                elems, closed = product_set(H, Q)
                if closed:
                    H = Subgroup.from_indices(parent, sorted(elems))
                    break
            else:
                raise NotFound(f"no Hall {primes}-subgroup found")
        return H

    return parent.cached(("hall", G.mask, primes.token()), compute)


# radicals and series ---------------------------------------------------------------


def _o_over(G: Subgroup, K: Subgroup, accept: Callable[[int], bool]) -> Subgroup:
    """Largest normal L of G containing K with every prime of |L:K| accepted.

    Such L exist (L = K) and the product of two of them is another, so the
    answer is the unique one of maximal order.
    """
    best = K
    for L in normal_subgroups(G):
        if L.order > best.order and K <= L and all(accept(q) for q in prime_divisors(L.order // K.order)):
            best = L
    return best


def o_pi_over(G: GroupLike, K: Subgroup, primes: PrimeSet, complement: bool = False) -> Subgroup:
    """Preimage of O_pi(G/K) (or O_pi'(G/K) when ``complement``) for normal K."""
    G = as_subgroup(G)
    _require_sub(G, K)
    if complement:
        return _o_over(G, K, lambda q: q not in primes)
    return _o_over(G, K, lambda q: q in primes)


def o_pi(G: GroupLike, primes: PrimeSet) -> Subgroup:
    """Largest normal pi-subgroup of G."""
    G = as_subgroup(G)
    return o_pi_over(G, G.parent.trivial, primes)


def upper_p_series(G: GroupLike, p: int) -> SeriesReport:
    """1 <= O_p' <= O_p',p <= O_p',p,p' <= ... <= G; NotPSoluble if it stalls."""
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        only_p = PrimeSet.of([p])
        terms = [parent.trivial]
        labels = []
        K = parent.trivial
        while K != G:
            L = o_pi_over(G, K, only_p, complement=True)
            if L != K:
                terms.append(L)
                labels.append("p'")
            M = o_pi_over(G, L, only_p)
            if M != L:
                terms.append(M)
                labels.append("p")
            if M == K:
                raise NotPSoluble(f"group of order {G.order} is not {p}-soluble")
            K = M
        return SeriesReport("upper-p", terms, labels)

    return parent.cached(("upper_p", G.mask, p), compute)


def p_length(G: GroupLike, p: int) -> int:
    return upper_p_series(G, p).length


def p_nilpotent_radical(G: GroupLike, p: int) -> Subgroup:
    """O_p',p(G): the largest normal p-nilpotent subgroup F_p(G)."""
    G = as_subgroup(G)
    only_p = PrimeSet.of([p])
    L = o_pi_over(G, G.parent.trivial, only_p, complement=True)
    return o_pi_over(G, L, only_p)


def _fitting_over(G: Subgroup, K: Subgroup) -> Subgroup:
    """Preimage of F(G/K) for normal K."""
    primes = prime_divisors(G.order // K.order)
    parts = [o_pi_over(G, K, PrimeSet.of([q])) for q in primes]
    return join(K, *parts) if parts else K


def fitting(G: GroupLike) -> Subgroup:
    G = as_subgroup(G)
    return G.parent.cached(("fitting", G.mask), lambda: _fitting_over(G, G.parent.trivial))


def fitting_series(G: GroupLike) -> SeriesReport:
    """Ascending Fitting series 1 = F_0 < F_1 < ... < F_n = G of a soluble group."""
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        terms = [parent.trivial]
        while terms[-1] != G:
            F = _fitting_over(G, terms[-1])
            if F == terms[-1]:
                raise NotSoluble(f"group of order {G.order} is not soluble")
            terms.append(F)
        return SeriesReport("fitting", terms, ["nilpotent"] * (len(terms) - 1))

    return parent.cached(("fitting_series", G.mask), compute)


def nilpotent_length(G: GroupLike) -> int:
    return fitting_series(G).length


def frattini(G: GroupLike) -> Subgroup:
    G = as_subgroup(G)
    mask = G.mask
    for M in maximal_subgroups(G):
        mask &= M.mask
    return Subgroup(G.parent, mask)


def chief_series(G: GroupLike) -> SeriesReport:
    """Ascending chief series; each step takes the canonically smallest
    normal subgroup of G strictly above the previous term."""
    G = as_subgroup(G)
    parent = G.parent

    def compute():
        normals = normal_subgroups(G)  # already in canonical order
        terms = [parent.trivial]
        while terms[-1] != G:
            K = terms[-1]
            terms.append(next(L for L in normals if K < L))
        return SeriesReport("chief", terms, ["chief"] * (len(terms) - 1))

    return parent.cached(("chief", G.mask), compute)


def chief_factors(G: GroupLike) -> list[tuple[Subgroup, Subgroup]]:
    """Every pair (H, K) of normal subgroups with H/K a chief factor of G."""
    G = as_subgroup(G)
    normals = normal_subgroups(G)
    out = []
    for K in normals:
        above = [L for L in normals if K < L]
        for H in above:
            if not any(K < L < H for L in above):
                out.append((H, K))
    return out


def factor_centralizer(G: GroupLike, H: Subgroup, K: Subgroup) -> Subgroup:
    """C_G(H/K) = {g in G : [h, g] in K for all h in H}, for normal K <= H."""
    G = as_subgroup(G)
    parent = G.parent
    hg = np.array(H.gens, dtype=np.int64)
    gidx = G.indices
    if hg.size == 0:
        return G
    inv = parent.inv
    # [h, g] = h^-1 g^-1 h g
    comm = parent.mul(parent.mul(inv[hg][None, :], inv[gidx][:, None]), parent.mul(hg[None, :], gidx[:, None]))
    ok = K.member_flags[comm].all(axis=1)
    return Subgroup(parent, _mask_from_indices(parent.order, gidx[ok]))


def arithmetic_length(G: GroupLike) -> int:
    """Maximum p-length over the primes dividing |G| (soluble groups only)."""
    G = as_subgroup(G)
    if not is_soluble(G):
        raise NotSoluble(f"group of order {G.order} is not soluble")
    return max((p_length(G, p) for p in pi(G)), default=0)


def is_supersoluble(G: GroupLike) -> bool:
    G = as_subgroup(G)
    return G.parent.cached(
        ("supersoluble", G.mask), lambda: all(is_prime(k) for k in chief_series(G).factor_orders())
    )
