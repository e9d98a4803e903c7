"""Deciders for generalised subnormality, each returning a checkable chain.

Every decider answers ``(flag, certificate)``.  A positive answer carries a
:class:`ChainCertificate` ``H = H_0 < H_1 < ... < H_n = G`` whose links are
re-checked by :func:`validate_certificate` without going through the search
code; a negative answer carries ``None``.
"""
from __future__ import annotations

import json
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Any, Callable, Iterator

import numpy as np

from .formations import FormationSpec, residual
from .permgroup import (
    GroupLike,
    PermGroup,
    Subgroup,
    _require_sub,
    as_subgroup,
    interval,
    is_normal,
    join,
    maximal_overgroups,
    normal_closure,
    normalizer,
    quotient,
)
from .primes import ALL_PRIMES, PrimeSet, is_prime
from .structure import normal_subgroups, pi, sylow, sylow_subgroups

__all__ = [
    "NORMAL_STEP",
    "RESIDUAL_MAXIMAL_STEP",
    "RESIDUAL_STEP",
    "PRIME_INDEX_STEP",
    "ChainCertificate",
    "validate_certificate",
    "is_subnormal",
    "is_p_subnormal",
    "is_kp_subnormal",
    "is_f_subnormal",
    "is_kf_subnormal",
    "is_strongly_kf_subnormal",
    "in_w_star",
    "in_W",
    "in_W_bar",
    "sylow_class_membership",
    "wstar_formation",
    "certificate_audit",
    "Witness",
]

NORMAL_STEP = "NormalStep"
RESIDUAL_MAXIMAL_STEP = "ResidualMaximalStep"
RESIDUAL_STEP = "ResidualStep"
PRIME_INDEX_STEP = "PrimeIndexStep"
STEP_KINDS = (NORMAL_STEP, RESIDUAL_MAXIMAL_STEP, RESIDUAL_STEP, PRIME_INDEX_STEP)

CERTIFICATE_SCHEMA = 1


@dataclass
class ChainCertificate:
    """Ascending chain with one justification per link (``len(steps) == len(chain) - 1``)."""

    chain: list[Subgroup]
    steps: list[str]
    formation: FormationSpec | None = None

    @property
    def subgroup(self) -> Subgroup:
        return self.chain[0]

    @property
    def ambient(self) -> Subgroup:
        return self.chain[-1]

    def validate(self) -> bool:
        return validate_certificate(self)[0]

    def to_dict(self) -> dict[str, Any]:
        parent = self.chain[0].parent
        return {
            "schema": CERTIFICATE_SCHEMA,
            "degree": parent.degree,
            "group_order": parent.order,
            "formation": self.formation.name if self.formation else None,
            "chain": [S.indices.tolist() for S in self.chain],
            "orders": [S.order for S in self.chain],
            "steps": list(self.steps),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, group: PermGroup, data: dict, formation: FormationSpec | None = None) -> "ChainCertificate":
        if data.get("schema") != CERTIFICATE_SCHEMA:
            raise ValueError(f"unsupported certificate schema {data.get('schema')!r}")
        if data["group_order"] != group.order or data["degree"] != group.degree:
            raise ValueError("certificate does not belong to this group")
        if data.get("formation") and (formation is None or formation.name != data["formation"]):
            raise ValueError(f"certificate needs formation {data['formation']!r}")
        chain = [Subgroup.from_indices(group, idx) for idx in data["chain"]]
        steps = list(data["steps"])
        return cls(chain, steps, formation if data.get("formation") else None)


# independent validation ----------------------------------------------------------
# These checks use raw element arrays and plain set closures, not the
# cached lattice routines the searches rely on.


def _rows(S: Subgroup) -> np.ndarray:
    return np.ascontiguousarray(S.parent.elements[S.indices], dtype=np.int64)


class _RowSet:
    """Exact membership and position lookup for a set of permutation rows.

    A wrapping dot product with fixed odd weights narrows each query to one
    candidate, which is then compared in full.
    """

    def __init__(self, rows: np.ndarray):
        self.rows = rows
        weights = np.random.default_rng(0x5EED).integers(1, 2**62, size=rows.shape[1]) | 1
        self.weights = weights
        h = self._hash(rows)
        self.order = np.argsort(h, kind="stable")
        self.sorted = h[self.order]
        if len(h) > 1 and (np.diff(self.sorted) == 0).any():
            raise RuntimeError("row hash collision")  # not expected at these sizes

    def _hash(self, rows: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            return (rows.astype(np.int64) * self.weights).sum(axis=-1)

    def find(self, rows: np.ndarray) -> np.ndarray:
        """Position of each query row in ``self.rows``, or -1."""
        h = self._hash(rows)
        pos = np.clip(np.searchsorted(self.sorted, h), 0, len(self.sorted) - 1)
        cand = self.order[pos]
        hit = (self.sorted[pos] == h) & (self.rows[cand] == rows).all(axis=-1)
        return np.where(hit, cand, -1)

    def __contains__(self, rows: np.ndarray) -> bool:
        return bool((self.find(rows) >= 0).all())


def _conjugates(ra: np.ndarray, rb: np.ndarray, chunk: int = 64):
    """Yield, per chunk of g in ``rb``, the rows g^-1 a g for every a in ``ra``.

    Rows are image tables, so x -> g(a(g^-1(x))) as arrays is g[a[g^-1]].
    """
    for start in range(0, len(rb), chunk):
        g = rb[start : start + chunk]
        ginv = np.argsort(g, axis=1)
        t = ra[:, ginv]  # (|A|, c, n): a[g^-1(x)]
        yield g[np.arange(len(g))[None, :, None], t]


def _brute_normal(A: Subgroup, B: Subgroup) -> bool:
    ra, rb = _rows(A), _rows(B)
    members = _RowSet(ra)
    return all(c in members for c in _conjugates(ra, rb))


def _right_cosets(ra: np.ndarray, rb: np.ndarray, bset: _RowSet) -> tuple[np.ndarray, list[int]]:
    """Label each row of ``rb`` by its right coset of A; also the first row of each coset."""
    label = np.full(len(rb), -1)
    reps = []
    for i in range(len(rb)):
        if label[i] < 0:
            label[bset.find(rb[i][ra])] = len(reps)  # the coset A x: rows x[a]
            reps.append(i)
    return label, reps


def _brute_maximal(A: Subgroup, B: Subgroup) -> bool:
    """Every g outside A, together with A, generates B.

    Works on the right cosets of A in B: <A, g> is the union of the cosets in
    the orbit of A under right multiplication by A and g.
    """
    if A.order == B.order:
        return False
    ra, rb = _rows(A), _rows(B)
    bset = _RowSet(rb)
    label, reps = _right_cosets(ra, rb, bset)
    k = len(reps)
    R = rb[reps]

    def action(h: np.ndarray) -> np.ndarray:
        return label[bset.find(h[R])]  # coset A r -> A r h

    moves = [action(a) for a in ra]
    for j in range(1, k):
        gen = moves + [action(rb[reps[j]])]
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for c in frontier:
                for m in gen:
                    d = int(m[c])
                    if d not in seen:
                        seen.add(d)
                        nxt.append(d)
            frontier = nxt
        if len(seen) != k:
            return False
    return True


def _brute_core(A: Subgroup, B: Subgroup) -> Subgroup:
    """Intersection of the conjugates g A g^-1 over g in B.

    a survives iff g^-1 a g lies in A for every g; that depends only on the
    left coset gA, so the inverses of right coset representatives suffice.
    """
    ra, rb = _rows(A), _rows(B)
    members = _RowSet(ra)
    _, reps = _right_cosets(ra, rb, _RowSet(rb))
    left_reps = np.argsort(rb[reps], axis=1)
    keep = np.ones(len(ra), dtype=bool)
    for c in _conjugates(ra, left_reps):
        keep &= (members.find(c) >= 0).all(axis=1)
    return Subgroup.from_indices(A.parent, A.indices[keep])


def _residual_below(F: FormationSpec, A: Subgroup, B: Subgroup) -> bool:
    """B^F <= A, tested as B/core_B(A) in F."""
    C = _brute_core(A, B)
    return F.contains(quotient(B, C).group)


def validate_certificate(cert: ChainCertificate) -> tuple[bool, str]:
    """Re-check every link of ``cert`` from scratch; returns ``(ok, reason)``."""
    chain, steps = cert.chain, cert.steps
    if len(chain) != len(steps) + 1:
        return False, "chain and step lists have inconsistent lengths"
    for i, (A, B, kind) in enumerate(zip(chain, chain[1:], steps)):
        if A.parent is not B.parent:
            return False, f"link {i}: different parent groups"
        if _rows(A) not in _RowSet(_rows(B)):
            return False, f"link {i}: not an inclusion"
        if kind == NORMAL_STEP:
            ok = _brute_normal(A, B)
        elif kind == PRIME_INDEX_STEP:
            ok = B.order % A.order == 0 and is_prime(B.order // A.order)
        elif kind in (RESIDUAL_MAXIMAL_STEP, RESIDUAL_STEP):
            if cert.formation is None:
                return False, f"link {i}: residual step without a formation"
            ok = _residual_below(cert.formation, A, B)
            if ok and kind == RESIDUAL_MAXIMAL_STEP:
                ok = _brute_maximal(A, B)
        else:
            return False, f"link {i}: unknown step kind {kind!r}"
        if not ok:
            return False, f"link {i}: {kind} condition fails"
    return True, "ok"


# deciders ------------------------------------------------------------------------

Result = tuple[bool, "ChainCertificate | None"]

_audit: ContextVar[Callable[[ChainCertificate], None] | None] = ContextVar("certificate_audit", default=None)


@contextmanager
def certificate_audit(callback: Callable[[ChainCertificate], None]) -> Iterator[None]:
    """Call ``callback`` on every certificate a decider hands out inside the block,
    including answers computed inside formation predicates."""
    token = _audit.set(callback)
    try:
        yield
    finally:
        _audit.reset(token)


def _emit(cert: ChainCertificate) -> Result:
    callback = _audit.get()
    if callback is not None:
        callback(cert)
    return True, cert


def _certificate(chain: list[Subgroup] | None, steps: list[str] | None, F: FormationSpec | None) -> Result:
    if chain is None:
        return False, None
    return _emit(ChainCertificate(chain, steps, F))


def is_subnormal(G: GroupLike, H: Subgroup) -> Result:
    """Subnormality via the descending chain of iterated normal closures."""
    G = as_subgroup(G)
    _require_sub(G, H)
    chain = [G]
    while True:
        K = normal_closure(chain[-1], H)
        if K == chain[-1]:
            break
        chain.append(K)
    if chain[-1] != H:
        return False, None
    chain.reverse()
    return _emit(ChainCertificate(chain, [NORMAL_STEP] * (len(chain) - 1)))


def _chain_search(G: Subgroup, H: Subgroup, candidates: Callable[[Subgroup], list[tuple[Subgroup, str]]]):
    """Top-down search for an ascending chain H = ... < A; memoised on the ambient A."""
    memo: dict[int, tuple | None] = {}

    def search(A: Subgroup):
        if A == H:
            return [H], []
        if A.mask in memo:
            return memo[A.mask]
        memo[A.mask] = None
        result = None
        for M, kind in candidates(A):
            sub = search(M)
            if sub is not None:
                result = (sub[0] + [A], sub[1] + [kind])
                break
        memo[A.mask] = result
        return result

    found = search(G)
    return (None, None) if found is None else found


def is_p_subnormal(G: GroupLike, H: Subgroup) -> Result:
    """Chain from H to G in which every index is prime."""
    G = as_subgroup(G)
    _require_sub(G, H)

    def candidates(A):
        return [(M, PRIME_INDEX_STEP) for M in maximal_overgroups(A, H) if is_prime(A.order // M.order)]

    return _certificate(*_chain_search(G, H, candidates), None)


def is_kp_subnormal(G: GroupLike, H: Subgroup) -> Result:
    """Chain from H to G whose links are normal or of prime index."""
    G = as_subgroup(G)
    _require_sub(G, H)

    def candidates(A):
        out = [(M, NORMAL_STEP) for M in reversed(normal_subgroups(A)) if H <= M and M != A]
        seen = {M.mask for M, _ in out}
        out += [
            (M, PRIME_INDEX_STEP)
            for M in maximal_overgroups(A, H)
            if is_prime(A.order // M.order) and M.mask not in seen
        ]
        return out

    return _certificate(*_chain_search(G, H, candidates), None)


def is_f_subnormal(F: FormationSpec, G: GroupLike, H: Subgroup) -> Result:
    """Maximal chain H = H_0 < ... < H_n = G with each H_i^F <= H_{i-1}.

    The last link H_{n-1} must contain both H and G^F; when H G^F = G no
    proper such subgroup exists and the answer is no.
    """
    G = as_subgroup(G)
    _require_sub(G, H)

    def candidates(A):
        K = join(H, residual(F, A))
        if K == A:
            return []
        return [(M, RESIDUAL_MAXIMAL_STEP) for M in maximal_overgroups(A, K)]

    return _certificate(*_chain_search(G, H, candidates), F)


def is_kf_subnormal(F: FormationSpec, G: GroupLike, H: Subgroup) -> Result:
    """Chain from H to G whose links are normal or satisfy H_i^F <= H_{i-1}.

    Links need not be maximal.
    """
    G = as_subgroup(G)
    _require_sub(G, H)

    def candidates(A):
        if is_normal(H, A):
            return [(H, NORMAL_STEP)]
        R = residual(F, A)
        if R <= H:
            return [(H, RESIDUAL_STEP)]
        out = [(M, NORMAL_STEP) for M in reversed(normal_subgroups(A)) if H <= M and M != A]
        seen = {M.mask for M, _ in out}
        above = [M for M in interval(A, join(H, R)) if M != A and M.mask not in seen]
        out += [(M, RESIDUAL_STEP) for M in reversed(above)]
        return out

    return _certificate(*_chain_search(G, H, candidates), F)


def is_strongly_kf_subnormal(F: FormationSpec, G: GroupLike, H: Subgroup) -> Result:
    """N_G(H) is F-subnormal in G; the certificate is the normalizer's chain."""
    G = as_subgroup(G)
    _require_sub(G, H)
    return is_f_subnormal(F, G, normalizer(G, H))


# Sylow classes --------------------------------------------------------------------


@dataclass
class Witness:
    prime: int | None
    subgroup: Subgroup | None
    tested: Subgroup | None
    flag: bool
    certificate: ChainCertificate | None = None
    note: str = ""


def sylow_class_membership(
    kind: str, F: FormationSpec, primes: PrimeSet, G: GroupLike, strict: bool = False
) -> tuple[bool, list[Witness]]:
    """Shared driver for the Sylow-embedding classes.

    ``kind`` is ``"wstar"`` (Sylow normalizers F-subnormal, and pi(G) inside
    the support of F), ``"W"`` (1 and the Sylow subgroups F-subnormal) or
    ``"Wbar"`` (the same with K-F-subnormality).  For hereditary F one Sylow
    subgroup per prime is tested, since the conditions are invariant under
    conjugation; ``strict`` tests every Sylow subgroup.
    """
    G = as_subgroup(G)
    witnesses: list[Witness] = []
    if kind == "wstar":
        missing = [p for p in pi(G) if p not in F.support]
        if missing:
            witnesses.append(Witness(None, None, None, False, note=f"primes {missing} outside support of {F.name}"))
            return False, witnesses
        decide = is_f_subnormal
    elif kind == "W":
        decide = is_f_subnormal
    elif kind == "Wbar":
        decide = is_kf_subnormal
    else:
        raise ValueError(f"unknown class kind {kind!r}")
    if kind in ("W", "Wbar"):
        one = G.parent.trivial
        ok, cert = decide(F, G, one)
        witnesses.append(Witness(None, one, one, ok, cert, note="trivial subgroup"))
        if not ok:
            return False, witnesses
    for q in primes.restrict(pi(G)):
        subs = sylow_subgroups(G, q) if strict or not F.hereditary else [sylow(G, q)]
        for P in subs:
            tested = normalizer(G, P) if kind == "wstar" else P
            ok, cert = decide(F, G, tested)
            witnesses.append(Witness(q, P, tested, ok, cert))
            if not ok:
                return False, witnesses
    return True, witnesses


def in_w_star(F: FormationSpec, primes: PrimeSet, G: GroupLike, strict: bool = False) -> tuple[bool, list[Witness]]:
    """pi(G) within the support of F and, for each q in pi ∩ pi(G), the normalizers
    of the Sylow q-subgroups are F-subnormal."""
    return sylow_class_membership("wstar", F, primes, G, strict)


def in_W(F: FormationSpec, primes: PrimeSet, G: GroupLike, strict: bool = False) -> bool:
    return sylow_class_membership("W", F, primes, G, strict)[0]


def in_W_bar(F: FormationSpec, primes: PrimeSet, G: GroupLike, strict: bool = False) -> bool:
    return sylow_class_membership("Wbar", F, primes, G, strict)[0]


def wstar_formation(F: FormationSpec, primes: PrimeSet = ALL_PRIMES, strict: bool = False) -> FormationSpec:
    """The class of groups whose Sylow normalizers (primes in ``primes``) are F-subnormal,
    wrapped as a formation with support inherited from F."""
    return FormationSpec(
        name=f"wstar[{F.name}]{'' if primes.is_all else '@' + primes.token()}{'!' if strict else ''}",
        member=lambda G: in_w_star(F, primes, G, strict)[0],
        support=F.support,
        hereditary=False,
        saturated=False,
        provenance="derived",
    )
