"""Verification suites that replay the theory over a corpus of groups.

Each suite runs group by group.  Assertions are tallied as checked,
passed, failed or skipped (skips always carry a reason code); implications
whose hypothesis does not hold are counted separately as vacuous.  Every
positive subnormality answer produced while a suite runs is re-checked by
the independent certificate validator.

Sampling (only in ``lemma1.2`` and ``lemma1.6-1.7``) uses a generator
seeded from the option seed and the group name, so reports are
reproducible.
"""
from __future__ import annotations

import itertools
import json
import random
import time
import zlib
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .builder import NAMED_EXAMPLES, named_example, parse, read_group_file, serialize
from .errors import GroupError, NotFound
from .formations import FormationSpec, builtin, parse_formation, residual
from .permgroup import (
    DEFAULT_ORDER_CAP,
    PermGroup,
    Subgroup,
    as_subgroup,
    centralizer,
    conjugacy_classes_of_subgroups,
    conjugate,
    interval,
    is_normal,
    join,
    maximal_subgroups,
    normalizer,
    product_set,
    quotient,
    _mask_from_indices,
)
from .primes import ALL_PRIMES, PrimeSet, pi_part, prime_divisors
from .structure import (
    factor_centralizer,
    chief_factors,
    frattini,
    hall,
    is_nilpotent,
    is_soluble,
    minimal_normal_subgroups,
    nilpotent_length,
    normal_subgroups,
    o_pi,
    p_length,
    p_nilpotent_radical,
    pi,
    sylow,
    sylow_subgroups,
)
from .subnormality import (
    ChainCertificate,
    certificate_audit,
    in_W,
    in_W_bar,
    in_w_star,
    is_f_subnormal,
    is_kf_subnormal,
    is_kp_subnormal,
    is_p_subnormal,
    is_strongly_kf_subnormal,
    is_subnormal,
    validate_certificate,
    wstar_formation,
)

__all__ = [
    "REPORT_SCHEMA",
    "SUITES",
    "Options",
    "VerificationReport",
    "SuiteReport",
    "run_suite",
    "run_suites",
    "load_corpus",
    "bundled_corpus_path",
    "rerun_counterexample",
]

REPORT_SCHEMA = "fsubnormal-report/1"

Corpus = list[tuple[str, PermGroup]]


@dataclass
class Options:
    seed: int = 0
    strict: bool = False
    prime_sets: tuple[str, ...] = ("all", "{2}", "{2,3}")
    wstar_formations: tuple[str, ...] = ("supersoluble", "N^2")
    # extra formations for the prop2.3 grid; an explicit support
    # makes the pi versus pi ∩ pi(F) comparison non-trivial
    prop23_extra: tuple[str, ...] = ("supersoluble@{2,3}",)
    sylow_formations: tuple[str, ...] = ("supersoluble", "NA", "N^2", "La(1)")
    calculus_formations: tuple[str, ...] = ("supersoluble", "N^2")
    subgroup_samples: int = 6
    normal_samples: int = 3
    conjugate_samples: int = 3
    triple_samples: int = 60
    workers: int = 1

    def to_dict(self) -> dict:
        return asdict(self)


# per-group bookkeeping ------------------------------------------------------------


def _gens(S) -> list[list[int]]:
    S = as_subgroup(S)
    return [list(g.images) for g in S.generators]


class _CertificateLedger:
    """Validates each certificate once; identical chains share a verdict."""

    def __init__(self):
        self.checked = 0
        self.valid = 0
        self.failures: list[dict] = []
        self._seen: dict[tuple, bool] = {}

    def __call__(self, cert: ChainCertificate) -> None:
        key = (
            id(cert.chain[0].parent),
            tuple(S.mask for S in cert.chain),
            tuple(cert.steps),
            cert.formation.name if cert.formation else None,
        )
        self.checked += 1
        ok = self._seen.get(key)
        if ok is None:
            ok, reason = validate_certificate(cert)
            self._seen[key] = ok
            if not ok:
                self.failures.append({"orders": [S.order for S in cert.chain], "steps": cert.steps, "reason": reason})
        self.valid += ok


class _Run:
    def __init__(self, suite: str, name: str, opts: Options):
        self.suite = suite
        self.name = name
        self.opts = opts
        self.counts = Counter(checked=0, passed=0, failed=0, skipped=0, vacuous=0)
        self.skip_reasons: Counter = Counter()
        self.counterexamples: list[dict] = []
        self.findings: list[dict] = []
        self.rng = random.Random(zlib.crc32(f"{opts.seed}:{suite}:{name}".encode()))

    def check(self, assertion: str, ok: bool, detail: str = "", **subgroups) -> bool:
        self.counts["checked"] += 1
        if ok:
            self.counts["passed"] += 1
        else:
            self.counts["failed"] += 1
            self.counterexamples.append(
                {
                    "suite": self.suite,
                    "group": self.name,
                    "assertion": assertion,
                    "detail": detail,
                    "subgroups": {k: {"order": as_subgroup(v).order, "generators": _gens(v)} for k, v in subgroups.items()},
                }
            )
        return ok

    def implies(self, assertion: str, hypothesis: bool, conclusion: Callable[[], bool], detail: str = "", **subgroups):
        if not hypothesis:
            self.counts["vacuous"] += 1
            return
        self.check(assertion, conclusion(), detail, **subgroups)

    def skip(self, assertion: str, reason: str) -> None:
        self.counts["checked"] += 1
        self.counts["skipped"] += 1
        self.skip_reasons[reason] += 1

    def note(self, **info) -> None:
        self.findings.append({"group": self.name, **info})

    def sample(self, items: list, k: int) -> list:
        return list(items) if len(items) <= k else self.rng.sample(list(items), k)


# shared helpers -------------------------------------------------------------------


def _sylow_pairs(G) -> list[tuple[int, Subgroup]]:
    return [(p, P) for p in pi(G) for P in sylow_subgroups(G, p)]


def _sylow_reps(G) -> list[tuple[int, Subgroup]]:
    return [(p, sylow(G, p)) for p in pi(G)]


class _Products:
    """Product sets AB as bitmasks over the parent's elements, memoized per suite run."""

    def __init__(self):
        self._memo: dict[tuple[int, int], int] = {}

    def __call__(self, A: Subgroup, B: Subgroup) -> int:
        key = (A.mask, B.mask)
        m = self._memo.get(key)
        if m is None:
            parent = A.parent
            prods = np.unique(parent.mul(A.indices[:, None], B.indices[None, :]).ravel())
            m = self._memo[key] = _mask_from_indices(parent.order, prods)
        return m


def _set(S: Subgroup) -> frozenset[int]:
    return frozenset(int(i) for i in S.indices)


def _formation(token: str) -> FormationSpec:
    return parse_formation(token)


def _wstar(F: FormationSpec, primes: PrimeSet, strict: bool = False) -> FormationSpec:
    return wstar_formation(F, primes, strict)


def _subsets(primes: Iterable[int]) -> list[PrimeSet]:
    ps = list(primes)
    return [PrimeSet.of(c) for r in range(1, len(ps) + 1) for c in itertools.combinations(ps, r)]


# suites ----------------------------------------------------------------------------


def _suite_lemma11(run: _Run, G: PermGroup) -> None:
    """Sylow facts: intersections, images and normalizer images under quotients,
    lifting of quotient Sylows, the two product identities, and generation."""
    G = as_subgroup(G)
    normals = normal_subgroups(G)
    sylows = _sylow_pairs(G)
    for N in normals:
        qm = quotient(G, N)
        Q = qm.group
        images: dict[int, set[int]] = {}
        for p, P in sylows:
            part = PrimeSet.of([p])
            run.check("(1) P∩N is Sylow in N", (P & N).order == pi_part(N.order, part), P=P, N=N)
            img = qm.image(P)
            images.setdefault(p, set()).add(img.mask)
            run.check("(1) PN/N is Sylow in G/N", img.order == pi_part(Q.order, part), P=P, N=N)
            run.check(
                "(1) N_{G/N}(PN/N) = N_G(P)N/N", qm.image(normalizer(G, P)) == normalizer(Q, img), P=P, N=N
            )
        for p in pi(Q):
            run.check(
                "(2) quotient Sylows are images",
                {S.mask for S in sylow_subgroups(Q, p)} <= images.get(p, set()),
                f"p={p}",
                N=N,
            )
    prod = _Products()
    for (p, P), N1, N2 in itertools.product(sylows, normals, normals):
        n12 = prod(N1, N2)
        run.check("(3) P∩N1N2 = (P∩N1)(P∩N2)", (P.mask & n12) == prod(P & N1, P & N2), P=P, N1=N1, N2=N2)
        a, b, c = prod(P, N1), prod(P, N2), prod(P, N1 & N2)
        run.check("(3) PN1∩PN2 = P(N1∩N2)", (a & b) == c, P=P, N1=N1, N2=N2)
    reps = [P for _, P in _sylow_reps(G)]
    run.check("(4) G is generated by one Sylow per prime", join(G.parent.trivial, *reps) == G)


def _suite_prop13(run: _Run, G: PermGroup) -> None:
    """Normalizer product identities for every Sylow subgroup and ordered pair of normal subgroups."""
    G = as_subgroup(G)
    normals = normal_subgroups(G)
    prod = _Products()
    for p, P in _sylow_pairs(G):
        NP = normalizer(G, P)
        for N1, N2 in itertools.product(normals, normals):
            rhs = prod(NP & N1, NP & N2)
            run.check("N_G(P)∩N1N2 = (N_G(P)∩N1)(N_G(P)∩N2)", (NP.mask & prod(N1, N2)) == rhs, P=P, N1=N1, N2=N2)
            a, b, c = prod(NP, N1), prod(NP, N2), prod(NP, N1 & N2)
            run.check("N_G(P)N1∩N_G(P)N2 = N_G(P)(N1∩N2)", (a & b) == c, P=P, N1=N1, N2=N2)


def _suite_lemma12(run: _Run, G: PermGroup) -> None:
    """Sampled triples (U, V, W) with VW, UV, UW subgroups: the two identities agree."""
    subs = interval(G, G.trivial)
    for _ in range(run.opts.triple_samples):
        U, V, W = (subs[run.rng.randrange(len(subs))] for _ in range(3))
        vw, c1 = product_set(V, W)
        uv, c2 = product_set(U, V)
        uw, c3 = product_set(U, W)
        if not (c1 and c2 and c3):
            run.skip("identities agree", "products-not-subgroups")
            continue
        first = (_set(U) & vw) == product_set(U & V, U & W)[0]
        second = (uv & uw) == product_set(U, V & W)[0]
        run.check("identities agree", first == second, f"first={first} second={second}", U=U, V=V, W=W)


def _suite_lemma14(run: _Run, G: PermGroup) -> None:
    """For every chief factor H/K and p dividing |H/K|: O_p(G/C) = 1 and F_p(G) <= C with C = C_G(H/K)."""
    G = as_subgroup(G)
    for H, K in chief_factors(G):
        C = factor_centralizer(G, H, K)
        Q = quotient(G, C).group
        for p in prime_divisors(H.order // K.order):
            run.check("O_p(G/C_G(H/K)) = 1", o_pi(Q, PrimeSet.of([p])).is_trivial(), f"p={p}", H=H, K=K)
            run.check("F_p(G) <= C_G(H/K)", p_nilpotent_radical(G, p) <= C, f"p={p}", H=H, K=K)


def _suite_calculus(run: _Run, G: PermGroup) -> None:
    """Sampled subnormality calculus for hereditary formations: quotients, lifts,
    products, transitivity, intersections, the residual shortcut, conjugation,
    and the implications between the subnormality notions."""
    Gs = as_subgroup(G)
    subs = interval(G, G.trivial)
    normals = normal_subgroups(G)
    opts = run.opts
    sample = run.sample(subs, opts.subgroup_samples)
    soluble = is_soluble(G)
    for token in opts.calculus_formations:
        F = _formation(token)
        fsn: dict[int, bool] = {}
        ksn: dict[int, bool] = {}

        def f_sn(H, A=Gs):
            if A == Gs:
                if H.mask not in fsn:
                    fsn[H.mask] = is_f_subnormal(F, A, H)[0]
                return fsn[H.mask]
            return is_f_subnormal(F, A, H)[0]

        def k_sn(H, A=Gs):
            if A == Gs:
                if H.mask not in ksn:
                    ksn[H.mask] = is_kf_subnormal(F, A, H)[0]
                return ksn[H.mask]
            return is_kf_subnormal(F, A, H)[0]

        tag = f"[{F.name}]"
        for H in sample:
            for N in run.sample(normals, opts.normal_samples):
                qm = quotient(Gs, N)
                img = qm.image(H)
                for kind, dec, flag in (("F", is_f_subnormal, f_sn(H)), ("K-F", is_kf_subnormal, k_sn(H))):
                    run.implies(f"1.6(1) {kind}-sn passes to G/N {tag}", flag, lambda: dec(F, qm.group, img)[0], H=H, N=N)
                    run.implies(
                        f"1.6(3) {kind}-sn passes to HN {tag}",
                        flag,
                        lambda: (f_sn if kind == "F" else k_sn)(join(H, N)),
                        H=H,
                        N=N,
                    )
                if N <= H:
                    up_f = is_f_subnormal(F, qm.group, img)[0]
                    run.implies(f"1.6(2) F-sn lifts from G/N {tag}", up_f, lambda: f_sn(H), H=H, N=N)
                    up_k = is_kf_subnormal(F, qm.group, img)[0]
                    run.implies(f"1.6(2) K-F-sn lifts from G/N {tag}", up_k, lambda: k_sn(H), H=H, N=N)
            above = [K for K in subs if H <= K]
            for K in run.sample(above, 2):
                run.implies(
                    f"1.6(4) F-sn is transitive {tag}",
                    f_sn(K) and is_f_subnormal(F, K, H)[0],
                    lambda: f_sn(H),
                    H=H,
                    K=K,
                )
                run.implies(
                    f"1.6(4) K-F-sn is transitive {tag}",
                    k_sn(K) and is_kf_subnormal(F, K, H)[0],
                    lambda: k_sn(H),
                    H=H,
                    K=K,
                )
            if soluble:
                sn = is_subnormal(Gs, H)[0]
                run.implies(f"1.6(5) subnormal implies F-sn {tag}", sn, lambda: f_sn(H), H=H)
                run.implies(f"1.6(5) subnormal implies K-F-sn {tag}", sn, lambda: k_sn(H), H=H)
            for M in run.sample(subs, 2):
                run.implies(f"1.7(1) F-sn meets M {tag}", f_sn(H), lambda: is_f_subnormal(F, M, H & M)[0], H=H, M=M)
                run.implies(f"1.7(1) K-F-sn meets M {tag}", k_sn(H), lambda: is_kf_subnormal(F, M, H & M)[0], H=H, M=M)
                run.implies(f"1.7(2) F-sn intersections {tag}", f_sn(H) and f_sn(M), lambda: f_sn(H & M), H=H, M=M)
                run.implies(
                    f"1.7(2) K-F-sn intersections {tag}", k_sn(H) and k_sn(M), lambda: k_sn(H & M), H=H, M=M
                )
            for x in run.sample(list(Gs.indices), opts.conjugate_samples):
                Hx = conjugate(H, int(x))
                run.check(f"1.7(4) F-sn is conjugation invariant {tag}", f_sn(H) == f_sn(Hx), H=H)
                run.check(f"1.7(4) K-F-sn is conjugation invariant {tag}", k_sn(H) == k_sn(Hx), H=H)
            run.implies(f"F-sn implies K-F-sn {tag}", f_sn(H), lambda: k_sn(H), H=H)
        # residual shortcut, exhaustive over subgroups containing the residual
        for H in interval(Gs, residual(F, Gs)):
            run.check(f"1.7(3) residual shortcut, F-sn {tag}", f_sn(H), H=H)
            run.check(f"1.7(3) residual shortcut, K-F-sn {tag}", k_sn(H), H=H)
        # p-groups: every subgroup is F-subnormal
        if len(pi(G)) == 1:
            for H in subs:
                run.check(f"1.6(6) p-group subgroups are F-sn {tag}", f_sn(H), H=H)
        if F.name == "supersoluble":
            for p, P in _sylow_pairs(Gs):
                run.implies("U-sn implies P-sn on Sylows", f_sn(P), lambda: is_p_subnormal(Gs, P)[0], P=P)
                run.implies("K-U-sn implies K-P-sn on Sylows", k_sn(P), lambda: is_kp_subnormal(Gs, P)[0], P=P)


def _prime_grid(opts: Options) -> list[PrimeSet]:
    return [PrimeSet.parse(t) for t in opts.prime_sets]


def _suite_prop23(run: _Run, G: PermGroup) -> None:
    """Monotonicity in pi, nilpotent members, pi versus pi ∩ pi(F), quotient closure,
    and monotonicity in F."""
    Gs = as_subgroup(G)
    grid = _prime_grid(run.opts)
    normals = normal_subgroups(G)
    for token in (*run.opts.wstar_formations, *run.opts.prop23_extra):
        F = _formation(token)
        for primes in grid:
            X = _wstar(F, primes)
            inG = X.contains(Gs)
            tag = f"[{F.name}, pi={primes.token()}]"
            for wider in grid:
                if wider != primes and primes.issubset(wider):
                    run.implies(
                        f"(1) wider pi gives a smaller class {tag} <= {wider.token()}",
                        _wstar(F, wider).contains(Gs),
                        lambda: inG,
                    )
            narrow = primes & F.support
            run.implies(
                f"(2) nilpotent (pi ∩ pi(F))-groups belong {tag}",
                is_nilpotent(Gs) and narrow.issuperset(pi(Gs)),
                lambda: inG,
            )
            run.check(f"(3) w_pi = w_(pi ∩ pi(F)) {tag}", inG == _wstar(F, narrow).contains(Gs))
            for N in normals:
                run.implies(f"(4) homomorph {tag}", inG, lambda: X.contains(quotient(Gs, N).group), N=N)
    for small, big in (("nilpotent", "supersoluble"), ("supersoluble", "NA"), ("NA", "N^2"), ("N^2", "La(1)")):
        F1, F2 = _formation(small), _formation(big)
        for primes in grid:
            run.implies(
                f"(5) {small} <= {big} gives w_pi inclusion [pi={primes.token()}]",
                _wstar(F1, primes).contains(Gs),
                lambda: _wstar(F2, primes).contains(Gs),
            )


def _suite_thm24(run: _Run, G: PermGroup) -> None:
    """w_pi* F is a formation (quotients, subdirect products), is closed under Hall
    subgroups, is idempotent, and contains F and w*F."""
    Gs = as_subgroup(G)
    normals = normal_subgroups(G)
    soluble = is_soluble(G)
    for token in run.opts.wstar_formations:
        F = _formation(token)
        wF = _wstar(F, ALL_PRIMES)
        for primes in _prime_grid(run.opts):
            X = _wstar(F, primes)
            tag = f"[{F.name}, pi={primes.token()}]"
            inG = X.contains(Gs)
            for N in normals:
                run.implies(f"quotient closure {tag}", inG, lambda: X.contains(quotient(Gs, N).group), N=N)
            for N1, N2 in itertools.combinations(normals, 2):
                if not (N1 & N2).is_trivial():
                    continue
                hyp = X.contains(quotient(Gs, N1).group) and X.contains(quotient(Gs, N2).group)
                run.implies(f"subdirect closure {tag}", hyp, lambda: inG, N1=N1, N2=N2)
            if inG:
                if not soluble:
                    run.skip(f"Hall subgroups belong {tag}", "insoluble")
                else:
                    for sigma in _subsets(pi(Gs)):
                        try:
                            H = hall(Gs, sigma)
                        except NotFound:
                            run.check(f"Hall subgroups belong {tag}", False, f"no Hall {sigma.token()}-subgroup")
                            continue
                        run.check(f"Hall subgroups belong {tag}", X.contains(H), f"sigma={sigma.token()}", H=H)
            XX = _wstar(X, primes)
            run.check(f"idempotence w(w F) = w F {tag}", XX.contains(Gs) == inG)
            run.implies(f"F <= w_pi F {tag}", F.contains(Gs), lambda: inG)
            run.implies(f"w F <= w_pi F {tag}", wF.contains(Gs), lambda: inG)


def _suite_thm34(run: _Run, G: PermGroup) -> None:
    """Membership in F is equivalent to pi(G) ⊆ pi(F) plus F-subnormal Sylow normalizers;
    supersolubility is equivalent to P-subnormal Sylow normalizers."""
    Gs = as_subgroup(G)
    strict = run.opts.strict
    for token in run.opts.sylow_formations:
        F = _formation(token)
        member = F.contains(Gs)
        ok, witnesses = in_w_star(F, ALL_PRIMES, Gs, strict)
        failing = next((w for w in witnesses if not w.flag), None)
        detail = "" if failing is None else f"failing prime {failing.prime}: {failing.note}"
        run.check(f"member iff w*-member [{F.name}]", member == ok, f"member={member} wstar={ok} {detail}".strip())
    U = builtin("supersoluble")
    pairs = _sylow_pairs(Gs) if strict else _sylow_reps(Gs)
    psn = all(is_p_subnormal(Gs, normalizer(Gs, P))[0] for _, P in pairs)
    run.check("supersoluble iff Sylow normalizers P-sn", U.contains(Gs) == psn, f"supersoluble={U.contains(Gs)} psn={psn}")


def _suite_lemma31(run: _Run, G: PermGroup) -> None:
    """La(1) closure properties, and the numeric shape of Frattini-free minimal non-La(1) groups."""
    Gs = as_subgroup(G)
    La = builtin("La", 1)
    inG = La.contains(Gs)
    normals = normal_subgroups(G)
    maxes = maximal_subgroups(Gs)
    for M in maxes:
        run.implies("hereditary (maximal subgroups)", inG, lambda: La.contains(M), M=M)
    Phi = frattini(Gs)
    run.implies("saturated", La.contains(quotient(Gs, Phi).group), lambda: inG, Phi=Phi)
    for N in normals:
        run.implies("quotient closure", inG, lambda: La.contains(quotient(Gs, N).group), N=N)
    for N1, N2 in itertools.combinations(normals, 2):
        run.implies("Fitting: normal products", La.contains(N1) and La.contains(N2), lambda: La.contains(join(N1, N2)), N1=N1, N2=N2)
        if (N1 & N2).is_trivial():
            hyp = La.contains(quotient(Gs, N1).group) and La.contains(quotient(Gs, N2).group)
            run.implies("subdirect closure", hyp, lambda: inG, N1=N1, N2=N2)
    minimal_non = not inG and all(La.contains(M) for M in maxes)
    if not minimal_non or not Phi.is_trivial():
        return
    if not is_soluble(G):
        run.skip("minimal non-La(1) shape", "insoluble")
        return
    primes = pi(Gs)
    lengths = sorted(p_length(Gs, p) for p in primes)
    classes = conjugacy_classes_of_subgroups(Gs, maxes)
    run.note(
        kind="Frattini-free minimal non-La(1)",
        order=Gs.order,
        primes=list(primes),
        p_lengths={str(p): p_length(Gs, p) for p in primes},
        nilpotent_length=nilpotent_length(Gs),
        maximal_classes=len(classes),
        maximal_class_orders=sorted(c[0].order for c in classes),
    )
    run.check("biprimary", len(primes) == 2, f"pi={primes}")
    run.check("p-lengths are {1, 2}", lengths == [1, 2], f"lengths={lengths}")
    run.check("nilpotent length 3", nilpotent_length(Gs) == 3)
    run.check("three classes of maximal subgroups", len(classes) == 3, f"classes={len(classes)}")


def _suite_lemma32(run: _Run, G: PermGroup) -> None:
    """Biprimary La(1)-groups are metanilpotent."""
    Gs = as_subgroup(G)
    run.implies(
        "biprimary La(1) implies N^2",
        len(pi(Gs)) == 2 and builtin("La", 1).contains(Gs),
        lambda: builtin("nilpotent-length", 2).contains(Gs),
    )


def _suite_lemma33(run: _Run, G: PermGroup) -> None:
    """Soluble La(1)-groups with no normal Sylow subgroup and all Sylow normalizers in F lie in F."""
    Gs = as_subgroup(G)
    if not is_soluble(Gs):
        run.skip("Sylow normalizers in F force G in F", "insoluble")
        return
    if Gs.is_trivial():
        run.skip("Sylow normalizers in F force G in F", "trivial-group")
        return
    inLa = builtin("La", 1).contains(Gs)
    normalizers = [normalizer(Gs, P) for _, P in _sylow_pairs(Gs)]
    no_normal_sylow = all(N != Gs for N in normalizers)
    for token in ("nilpotent", "supersoluble", "NA", "N^2"):
        F = _formation(token)
        hyp = inLa and no_normal_sylow and all(F.contains(N) for N in normalizers)
        run.implies(f"Sylow normalizers in F force G in F [{F.name}]", hyp, lambda: F.contains(Gs))


def _suite_remark35(run: _Run, G: PermGroup) -> None:
    """Soluble groups lie in W N^2 and in W-bar N^2; w* N^2 coincides with N^2."""
    Gs = as_subgroup(G)
    N2 = builtin("nilpotent-length", 2)
    strict = run.opts.strict
    if is_soluble(Gs):
        run.check("soluble groups are in W N^2", in_W(N2, ALL_PRIMES, Gs, strict))
        run.check("soluble groups are in W-bar N^2", in_W_bar(N2, ALL_PRIMES, Gs, strict))
    else:
        run.skip("soluble groups are in W N^2", "insoluble")
        run.skip("soluble groups are in W-bar N^2", "insoluble")
    ws = in_w_star(N2, ALL_PRIMES, Gs, strict)[0]
    run.check("w* N^2 membership equals N^2 membership", ws == N2.contains(Gs), f"wstar={ws}")
    run.implies("w* N^2 inside W-bar N^2", ws, lambda: in_W_bar(N2, ALL_PRIMES, Gs, strict))


def _suite_formations(run: _Run, G: PermGroup) -> None:
    """Builtin formations: quotient and subdirect closure, declared hereditary and
    saturated flags, the inclusion chain, and residual idempotence."""
    Gs = as_subgroup(G)
    normals = normal_subgroups(G)
    maxes = maximal_subgroups(Gs)
    Phi = frattini(Gs)
    tokens = ("all", "soluble", "nilpotent", "NA", "supersoluble", "N^2", "N^3", "La(1)", "La(2)")
    for token in tokens:
        F = _formation(token)
        inG = F.contains(Gs)
        tag = f"[{F.name}]"
        run.check(f"trivial group belongs {tag}", F.contains(Gs.parent.trivial))
        for N in normals:
            run.implies(f"quotient closure {tag}", inG, lambda: F.contains(quotient(Gs, N).group), N=N)
        for N1, N2 in itertools.combinations(normals, 2):
            if (N1 & N2).is_trivial():
                hyp = F.contains(quotient(Gs, N1).group) and F.contains(quotient(Gs, N2).group)
                run.implies(f"subdirect closure {tag}", hyp, lambda: inG, N1=N1, N2=N2)
        if F.hereditary:
            for M in maxes:
                run.implies(f"hereditary {tag}", inG, lambda: F.contains(M), M=M)
        if F.saturated:
            run.implies(f"saturated {tag}", F.contains(quotient(Gs, Phi).group), lambda: inG)
        R = residual(F, Gs)
        qm = quotient(Gs, R)
        run.check(f"residual quotient belongs {tag}", F.contains(qm.group), R=R)
        run.check(f"residual is idempotent {tag}", residual(F, qm.group).is_trivial(), R=R)
    chain = ("supersoluble", "NA", "N^2", "La(1)", "soluble")
    for small, big in zip(chain, chain[1:]):
        run.implies(f"{small} implies {big}", _formation(small).contains(Gs), lambda: _formation(big).contains(Gs))
    run.implies("nilpotent implies supersoluble", _formation("nilpotent").contains(Gs), lambda: _formation("supersoluble").contains(Gs))


def _suite_strict(run: _Run, G: PermGroup) -> None:
    """One Sylow representative per prime gives the same w* answer as all conjugates."""
    Gs = as_subgroup(G)
    for token in run.opts.sylow_formations:
        F = _formation(token)
        if not F.hereditary:
            continue
        for primes in _prime_grid(run.opts):
            a = in_w_star(F, primes, Gs, strict=False)[0]
            b = in_w_star(F, primes, Gs, strict=True)[0]
            run.check(f"representative policy matches strict mode [{F.name}, pi={primes.token()}]", a == b)


def _suite_examples(run: _Run, G: PermGroup | None = None) -> None:
    """The two explicit constructions and their stated properties."""
    U = builtin("supersoluble")
    G = named_example("intro-s3-f7")
    Gs = as_subgroup(G)
    mins = minimal_normal_subgroups(G)
    run.check("intro: order 294", G.order == 294)
    run.check("intro: unique minimal normal subgroup of order 49", [M.order for M in mins] == [49])
    V = mins[0]
    run.check("intro: C_G(U) = U", centralizer(G, V) == V)
    run.check("intro: residual for supersolubility is U", residual(U, G) == V)
    Q = sylow(G, 3)
    S = normalizer(G, Q)
    UQ = join(V, Q)
    run.check("intro: G not supersoluble", not U.contains(G))
    run.check("intro: G/U supersoluble", U.contains(quotient(G, V).group))
    run.check("intro: UQ supersoluble", U.contains(UQ), H=UQ)
    run.check("intro: UQ K-U-subnormal", is_kf_subnormal(U, G, UQ)[0], H=UQ)
    run.check("intro: Q K-U-subnormal", is_kf_subnormal(U, G, Q)[0], Q=Q)
    run.check("intro: N_G(Q) has order 6", S.order == 6, S=S)
    run.check("intro: N_G(Q) not normal", not is_normal(S, G), S=S)
    run.check("intro: N_G(Q) not U-subnormal", not is_f_subnormal(U, G, S)[0], S=S)
    run.check("intro: Q not strongly K-U-subnormal", not is_strongly_kf_subnormal(U, G, Q)[0], Q=Q)
    run.check("intro: Hall {2,3}-subgroup has order 6", hall(G, PrimeSet.of([2, 3])).order == 6)

    N3 = builtin("nilpotent-length", 3)
    E = named_example("ex21-s4-f3")
    Es = as_subgroup(E)
    run.check("ex2.1: order 648", E.order == 648)
    run.check("ex2.1: pi(G) = {2,3}", pi(E) == (2, 3))
    run.check("ex2.1: nilpotent length 4", nilpotent_length(E) == 4)
    run.check("ex2.1: G not in N^3", not N3.contains(E))
    run.check("ex2.1: every maximal subgroup in N^3", all(N3.contains(M) for M in maximal_subgroups(E)))
    for p, P in _sylow_pairs(Es):
        run.check(f"ex2.1: Sylow {p}-normalizer N^3-subnormal", is_f_subnormal(N3, E, normalizer(E, P))[0], P=P)
    ok, _ = in_w_star(N3, ALL_PRIMES, E, strict=True)
    run.check("ex2.1: G in w* N^3 but not in N^3", ok and not N3.contains(E))
    Vm = minimal_normal_subgroups(E)
    run.check("ex2.1: unique minimal normal subgroup of order 27", [M.order for M in Vm] == [27])
    run.check("ex2.1: C_G(U) = U", centralizer(E, Vm[0]) == Vm[0])


SUITES: dict[str, tuple[Callable, str]] = {
    "lemma1.1": (_suite_lemma11, "Sylow subgroups under intersections, quotients and products"),
    "prop1.3": (_suite_prop13, "Sylow normalizer product identities"),
    "lemma1.2": (_suite_lemma12, "equivalence of the two Dedekind-type identities (sampled)"),
    "lemma1.4": (_suite_lemma14, "p-nilpotent radical centralizes chief factors"),
    "lemma1.6-1.7": (_suite_calculus, "subnormality calculus (sampled)"),
    "prop2.3": (_suite_prop23, "elementary properties of w_pi* F"),
    "thm2.4": (_suite_thm24, "w_pi* F is an S_H-closed idempotent formation"),
    "thm3.4": (_suite_thm34, "F equals w* F for hereditary saturated F inside La(1)"),
    "lemma3.1": (_suite_lemma31, "La(1) closure and minimal non-La(1) groups"),
    "lemma3.2": (_suite_lemma32, "biprimary La(1) groups are metanilpotent"),
    "lemma3.3": (_suite_lemma33, "Sylow normalizers in F force membership"),
    "remark3.5": (_suite_remark35, "W N^2, W-bar N^2 and w* N^2"),
    "formations": (_suite_formations, "builtin formation axioms and inclusions"),
    "strict-mode": (_suite_strict, "one Sylow representative versus all conjugates"),
    "examples": (_suite_examples, "the two explicit constructions"),
}
GLOBAL_SUITES = {"examples"}


# reports ----------------------------------------------------------------------------


@dataclass
class SuiteReport:
    suite: str
    description: str
    counts: dict
    skip_reasons: dict
    certificates: dict
    groups: dict
    counterexamples: list
    findings: list
    wall_time_s: float = 0.0

    @property
    def failed(self) -> int:
        return self.counts["failed"] + self.certificates["invalid"]


@dataclass
class VerificationReport:
    corpus: dict
    options: dict
    suites: list[SuiteReport] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def failed(self) -> int:
        return sum(s.failed for s in self.suites)

    @property
    def totals(self) -> dict:
        keys = ("checked", "passed", "failed", "skipped", "vacuous")
        out = {k: sum(s.counts[k] for s in self.suites) for k in keys}
        out["certificates_checked"] = sum(s.certificates["checked"] for s in self.suites)
        out["certificates_valid"] = sum(s.certificates["valid"] for s in self.suites)
        return out

    def to_dict(self, include_time: bool = True) -> dict:
        suites = []
        for s in self.suites:
            d = asdict(s)
            if not include_time:
                d.pop("wall_time_s")
            suites.append(d)
        out = {
            "schema": REPORT_SCHEMA,
            "corpus": self.corpus,
            "options": self.options,
            "totals": self.totals,
            "suites": suites,
        }
        if include_time:
            out["wall_time_s"] = self.wall_time_s
        return out

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), indent=2, sort_keys=True, ensure_ascii=False)


def _run_group(suite: str, name: str, group: PermGroup | None, opts: Options) -> dict:
    run = _Run(suite, name, opts)
    ledger = _CertificateLedger()
    fn = SUITES[suite][0]
    with certificate_audit(ledger):
        try:
            fn(run, group)
        except GroupError as exc:
            run.check("suite completes", False, f"{type(exc).__name__}: {exc}")
    return {
        "name": name,
        "counts": dict(run.counts),
        "skip_reasons": dict(run.skip_reasons),
        "counterexamples": run.counterexamples,
        "findings": run.findings,
        "certificates": {"checked": ledger.checked, "valid": ledger.valid, "failures": ledger.failures},
    }


def _run_group_text(args: tuple[str, str, str, int, Options]) -> dict:
    suite, name, text, cap, opts = args
    group = parse(text, cap=cap)[0][1] if text else None
    return _run_group(suite, name, group, opts)


def _assemble(suite: str, results: list[dict], elapsed: float) -> SuiteReport:
    counts = Counter(checked=0, passed=0, failed=0, skipped=0, vacuous=0)
    reasons: Counter = Counter()
    cert = Counter(checked=0, valid=0)
    cert_failures = []
    groups = {}
    counterexamples, findings = [], []
    for r in sorted(results, key=lambda r: r["name"]):
        counts.update(r["counts"])
        reasons.update(r["skip_reasons"])
        cert["checked"] += r["certificates"]["checked"]
        cert["valid"] += r["certificates"]["valid"]
        cert_failures += [{"group": r["name"], **f} for f in r["certificates"]["failures"]]
        groups[r["name"]] = r["counts"]
        counterexamples += r["counterexamples"]
        findings += r["findings"]
    certificates = {
        "checked": cert["checked"],
        "valid": cert["valid"],
        "invalid": cert["checked"] - cert["valid"],
        "failures": cert_failures,
    }
    return SuiteReport(
        suite,
        SUITES[suite][1],
        dict(counts),
        dict(sorted(reasons.items())),
        certificates,
        groups,
        counterexamples,
        findings,
        round(elapsed, 3),
    )


def run_suite(suite: str, corpus: Corpus, options: Options | None = None) -> SuiteReport:
    """Run one suite over ``corpus`` (a list of ``(name, group)`` pairs)."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; known: {sorted(SUITES)}")
    opts = options or Options()
    start = time.perf_counter()
    if suite in GLOBAL_SUITES:
        results = [_run_group(suite, "named-examples", None, opts)]
    elif opts.workers > 1 and len(corpus) > 1:
        cap = max([DEFAULT_ORDER_CAP, *(G.order for _, G in corpus)])
        jobs = [(suite, name, serialize(name, G), cap, opts) for name, G in corpus]
        with ProcessPoolExecutor(max_workers=opts.workers) as pool:
            results = list(pool.map(_run_group_text, jobs))
    else:
        results = [_run_group(suite, name, G, opts) for name, G in corpus]
    return _assemble(suite, results, time.perf_counter() - start)


def run_suites(
    suites: Iterable[str], corpus: Corpus, options: Options | None = None, description: dict | None = None
) -> VerificationReport:
    """Run several suites (``"all"`` expands to every suite) and collect one report."""
    names = list(suites)
    if "all" in names:
        names = list(SUITES)
    opts = options or Options()
    start = time.perf_counter()
    report = VerificationReport(
        corpus=description or {"groups": [name for name, _ in corpus]},
        options=opts.to_dict(),
    )
    for s in names:
        report.suites.append(run_suite(s, corpus, opts))
    report.wall_time_s = round(time.perf_counter() - start, 3)
    return report


def rerun_counterexample(record: dict, corpus: Corpus, options: Options | None = None) -> bool:
    """Re-run the suite on the record's group; True if the same assertion fails again."""
    if record["suite"] in GLOBAL_SUITES:
        result = _run_group(record["suite"], record["group"], None, options or Options())
    else:
        group = dict(corpus)[record["group"]]
        result = _run_group(record["suite"], record["group"], group, options or Options())
    return any(
        c["assertion"] == record["assertion"] and c["detail"] == record["detail"] and c["subgroups"] == record["subgroups"]
        for c in result["counterexamples"]
    )


# corpus -------------------------------------------------------------------------------


def bundled_corpus_path() -> Path:
    return Path(__file__).with_name("data") / "small_groups.grp"


def load_corpus(
    path: str | Path | None = None, with_examples: bool = False, cap: int = DEFAULT_ORDER_CAP
) -> tuple[Corpus, dict]:
    """Groups from a group file or every ``*.grp`` file in a directory (the bundled
    corpus when ``path`` is None), sorted by name, plus a description with the
    file headers.  ``with_examples`` appends the two named constructions."""
    path = bundled_corpus_path() if path is None else Path(path)
    files = sorted(path.glob("*.grp")) if path.is_dir() else [path]
    groups: dict[str, PermGroup] = {}
    headers = {}
    for f in files:
        records, header = read_group_file(f, cap=cap)
        headers[f.name] = header
        for name, G in records:
            if name in groups:
                raise ValueError(f"duplicate group name {name!r} in {f}")
            groups[name] = G
    corpus = sorted(groups.items())
    if with_examples:
        corpus += [(name, named_example(name, cap=cap)) for name in sorted(NAMED_EXAMPLES)]
    description = {
        "source": str(path.name),
        "files": [f.name for f in files],
        "headers": headers,
        "groups": len(corpus),
        "with_examples": with_examples,
    }
    return corpus, description
