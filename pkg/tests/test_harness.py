import json

import pytest

from fsubnormal import harness
from fsubnormal.builder import alternating, cyclic, symmetric
from fsubnormal.harness import GLOBAL_SUITES, SUITES, Options, load_corpus, rerun_counterexample, run_suite, run_suites


def small_corpus():
    return [("a4", alternating(4)), ("c6", cyclic(6)), ("s4", symmetric(4))]


def assert_consistent(report):
    c = report.counts
    assert c["passed"] + c["failed"] + c["skipped"] == c["checked"]
    assert report.certificates["valid"] + report.certificates["invalid"] == report.certificates["checked"]


def test_normalizer_identities_on_s4():
    report = run_suite("prop1.3", [("s4", symmetric(4))])
    assert report.counts["checked"] > 0 and report.failed == 0
    assert_consistent(report)


def test_formation_sweep_on_trivial_group():
    report = run_suite("thm3.4", [("one", cyclic(1))])
    assert report.failed == 0 and report.counts["passed"] > 0


def test_examples_suite_builds_both_groups():
    report = run_suite("examples", [])
    assert report.failed == 0 and report.counts["passed"] > 50
    assert report.certificates["checked"] > 0
    assert report.counterexamples == [] and set(report.groups) == {"named-examples"}
    assert_consistent(report)


@pytest.mark.parametrize("suite", [s for s in SUITES if s not in GLOBAL_SUITES])
def test_every_suite_passes_on_a_small_corpus(suite):
    report = run_suite(suite, small_corpus())
    assert report.failed == 0, report.counterexamples[:3]
    assert_consistent(report)
    assert set(report.groups) == {"a4", "c6", "s4"}


def test_minimal_non_la1_detects_s4():
    report = run_suite("lemma3.1", [("s4", symmetric(4))])
    (finding,) = [f for f in report.findings if f["group"] == "s4"]
    assert finding["nilpotent_length"] == 3
    assert sorted(finding["maximal_class_orders"]) == [6, 8, 12]


def test_insoluble_groups_are_skipped_with_reasons():
    for suite in ("remark3.5", "lemma3.3", "lemma3.1"):
        report = run_suite(suite, [("a5", alternating(5))])
        assert report.counts["skipped"] > 0 and set(report.skip_reasons) == {"insoluble"}
        assert report.failed == 0


def test_reports_are_deterministic():
    corpus = small_corpus()
    a = run_suites(["lemma1.2", "lemma1.6-1.7"], corpus, Options(seed=7)).to_json(include_time=False)
    b = run_suites(["lemma1.2", "lemma1.6-1.7"], corpus, Options(seed=7)).to_json(include_time=False)
    assert a == b
    data = json.loads(a)
    assert data["schema"] == harness.REPORT_SCHEMA and "wall_time_s" not in json.dumps(data)


def test_worker_pool_gives_the_same_report():
    corpus = small_corpus()
    one = run_suites(["prop1.3", "thm3.4"], corpus, Options(workers=1)).to_dict(include_time=False)
    two = run_suites(["prop1.3", "thm3.4"], corpus, Options(workers=2)).to_dict(include_time=False)
    one["options"].pop("workers")
    two["options"].pop("workers")
    assert one == two


def test_counterexamples_rerun(monkeypatch):
    def broken(run, G):
        run.check("order is not 6", G.order != 6, f"order {G.order}", whole=G)

    monkeypatch.setitem(SUITES, "broken", (broken, "always fails on order 6"))
    corpus = small_corpus()
    report = run_suite("broken", corpus)
    assert report.failed == 1
    (record,) = report.counterexamples
    assert record["group"] == "c6" and record["subgroups"]["whole"]["order"] == 6
    assert rerun_counterexample(record, corpus)
    assert not rerun_counterexample({**record, "group": "a4"}, corpus)
    assert run_suites(["broken"], corpus).failed == 1


def test_group_errors_become_failures(monkeypatch):
    from fsubnormal.errors import NotSoluble

    def explode(run, G):
        raise NotSoluble("boom")

    monkeypatch.setitem(SUITES, "explode", (explode, ""))
    report = run_suite("explode", [("c6", cyclic(6))])
    assert report.failed == 1 and "boom" in report.counterexamples[0]["detail"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", [])


def test_load_corpus(tmp_path):
    corpus, desc = load_corpus(tmp_path)
    assert corpus == [] and desc["groups"] == 0
    (tmp_path / "b.grp").write_text("# second\ngroup zz\ndegree 2\ngen 2 1\nend\n")
    (tmp_path / "a.grp").write_text("# first\ngroup aa\ndegree 3\ngen 2 3 1\nend\n")
    corpus, desc = load_corpus(tmp_path, with_examples=True)
    assert [n for n, _ in corpus] == ["aa", "zz", "ex21-s4-f3", "intro-s3-f7"]
    assert desc["headers"] == {"a.grp": ["first"], "b.grp": ["second"]}
    (tmp_path / "c.grp").write_text("group aa\ndegree 2\ngen 2 1\nend\n")
    with pytest.raises(ValueError):
        load_corpus(tmp_path)


def test_bundled_corpus():
    corpus, desc = load_corpus()
    assert len(corpus) == 319 and max(G.order for _, G in corpus) == 63
    assert [n for n, _ in corpus] == sorted(n for n, _ in corpus)
    assert "GAP" in desc["headers"]["small_groups.grp"][0]
