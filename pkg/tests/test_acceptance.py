"""Acceptance criteria, replayed over the bundled corpus (all groups of order <= 63).

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  Suite reports are computed once per session.
"""
import csv
import time
from functools import lru_cache

import pytest

from fsubnormal import (
    ALL_PRIMES,
    in_w_star,
    interval,
    is_f_subnormal,
    is_kf_subnormal,
    is_normal,
    is_p_subnormal,
    is_strongly_kf_subnormal,
    join,
    maximal_subgroups,
    minimal_normal_subgroups,
    named_example,
    nilpotent_length,
    normalizer,
    parse_formation,
    pi,
    quotient,
    sylow,
)
from fsubnormal.harness import SUITES, Options, bundled_corpus_path, load_corpus, run_suite
from fsubnormal.structure import sylow_subgroups
from fsubnormal.subnormality import validate_certificate

SUPERSOLUBLE = parse_formation("supersoluble")


@lru_cache(maxsize=1)
def corpus():
    return load_corpus()[0]


@lru_cache(maxsize=None)
def report(suite):
    return run_suite(suite, corpus(), Options())


def assert_clean(rep):
    assert rep.counts["checked"] > 0
    assert rep.failed == 0, rep.counterexamples[:5] or rep.certificates["failures"][:5]
    assert rep.counts["passed"] + rep.counts["failed"] + rep.counts["skipped"] == rep.counts["checked"]


@pytest.mark.criterion(1, "intro group [U]S3 over GF(7): seven stated booleans, under 10 s")
def test_order_294_counterexample_bundle():
    start = time.perf_counter()
    G = named_example("intro-s3-f7")
    (U,) = minimal_normal_subgroups(G)
    Q = sylow(G, 3)
    UQ = join(U, Q)
    S = normalizer(G, Q)
    bundle = {
        "G supersoluble": SUPERSOLUBLE.contains(G),
        "G/U supersoluble": SUPERSOLUBLE.contains(quotient(G, U).group),
        "UQ supersoluble and K-U-subnormal": SUPERSOLUBLE.contains(UQ) and is_kf_subnormal(SUPERSOLUBLE, G, UQ)[0],
        "Q K-U-subnormal": is_kf_subnormal(SUPERSOLUBLE, G, Q)[0],
        "N_G(Q) of order 6": S.order == 6,
        "N_G(Q) normal or U-subnormal": is_normal(S, G) or is_f_subnormal(SUPERSOLUBLE, G, S)[0],
        "Q strongly K-U-subnormal": is_strongly_kf_subnormal(SUPERSOLUBLE, G, Q)[0],
    }
    elapsed = time.perf_counter() - start
    assert G.order == 294
    assert bundle == {
        "G supersoluble": False,
        "G/U supersoluble": True,
        "UQ supersoluble and K-U-subnormal": True,
        "Q K-U-subnormal": True,
        "N_G(Q) of order 6": True,
        "N_G(Q) normal or U-subnormal": False,
        "Q strongly K-U-subnormal": False,
    }
    assert elapsed < 10, elapsed


@pytest.mark.criterion(2, "[U]S4 over GF(3): order 648, nilpotent length 4, minimal non-N^3, in w*N^3, under 120 s")
def test_order_648_wstar_bundle():
    start = time.perf_counter()
    F = parse_formation("N^3")
    G = named_example("ex21-s4-f3")
    assert G.order == 648 and pi(G) == (2, 3)
    assert nilpotent_length(G) == 4
    assert not F.contains(G)
    assert all(F.contains(M) for M in maximal_subgroups(G))
    for p in pi(G):
        for P in sylow_subgroups(G, p):
            ok, cert = is_f_subnormal(F, G, normalizer(G, P))
            assert ok and validate_certificate(cert)[0]
    assert in_w_star(F, ALL_PRIMES, G)[0]
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(3, "F = w*F for F in {U, NA, N^2, La(1)} on every corpus group, under 30 min")
def test_formation_equals_wstar_sweep():
    start = time.perf_counter()
    rep = report("thm3.4")
    assert_clean(rep)
    assert len(rep.groups) == 319
    assert time.perf_counter() - start < 30 * 60


@pytest.mark.criterion(4, "supersoluble iff all Sylow normalizers P-subnormal, every corpus group")
def test_supersoluble_iff_prime_index_normalizers():
    bad = []
    for name, G in corpus():
        psn = all(is_p_subnormal(G, normalizer(G, P))[0] for p in pi(G) for P in sylow_subgroups(G, p))
        if psn != SUPERSOLUBLE.contains(G):
            bad.append(name)
    assert bad == []
    assert report("thm3.4").failed == 0


@pytest.mark.criterion(5, "Sylow normalizer product identities and Sylow facts, exhaustive on the corpus")
def test_sylow_identity_sweeps():
    for suite in ("prop1.3", "lemma1.1"):
        assert_clean(report(suite))


@pytest.mark.criterion(6, "w_pi*F: quotients, subdirect products, Hall subgroups, idempotence, F and w*F inside")
def test_wstar_formation_closure_sweep():
    rep = report("thm2.4")
    assert_clean(rep)
    assert set(rep.skip_reasons) <= {"insoluble"}


@pytest.mark.criterion(7, "elementary properties of w_pi*F, parts (1)-(5), same grid")
def test_wstar_elementary_properties_sweep():
    assert_clean(report("prop2.3"))


@pytest.mark.criterion(8, "soluble groups lie in W N^2 and W-bar N^2; w*N^2 equals N^2")
def test_metanilpotent_sylow_classes_sweep():
    rep = report("remark3.5")
    assert_clean(rep)


@pytest.mark.criterion(9, "La(1) closure, S4 as Frattini-free minimal non-La(1), biprimary La(1) in N^2, Sylow-normalizer lemma")
def test_arithmetic_length_one_sweeps():
    for suite in ("lemma3.1", "lemma3.2", "lemma3.3"):
        assert_clean(report(suite))
    findings = {f["group"]: f for f in report("lemma3.1").findings}
    s4 = findings["sg_024_012"]
    assert s4["nilpotent_length"] == 3 and sorted(s4["p_lengths"].values()) == [1, 2]
    assert sorted(s4["maximal_class_orders"]) == [6, 8, 12]


@pytest.mark.criterion(10, "every positive subnormality answer in every suite re-validates independently")
def test_certificate_soundness():
    total = 0
    for suite in SUITES:
        rep = report(suite) if suite != "examples" else run_suite("examples", [])
        assert rep.certificates["invalid"] == 0, (suite, rep.certificates["failures"][:3])
        assert rep.certificates["valid"] == rep.certificates["checked"]
        total += rep.certificates["checked"]
    assert total > 0


@pytest.mark.criterion(11, "subgroup counts of interval(G, 1) match the CAS golden counts for orders <= 24")
def test_subgroup_counts_match_golden():
    with open(bundled_corpus_path().with_name("golden_invariants.tsv"), newline="") as fh:
        gold = {row["name"]: int(row["nr_subgroups"]) for row in csv.DictReader(fh, delimiter="\t")}
    checked = 0
    for name, G in corpus():
        if G.order <= 24:
            assert len(interval(G, G.trivial)) == gold[name], name
            checked += 1
    assert checked == 74
