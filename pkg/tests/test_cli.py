import json

import pytest

from fsubnormal.builder import parse
from fsubnormal.cli import CliConfig, UsageError, run

S4_A4 = """group s4
degree 4
gen 2 3 4 1
gen 2 1 3 4
end
group a4
degree 4
gen 2 3 1 4
gen 1 3 4 2
end
"""


@pytest.fixture
def groups(tmp_path):
    path = tmp_path / "g.grp"
    path.write_text(S4_A4)
    return str(path)


@pytest.fixture(scope="module")
def intro_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("ex") / "intro.grp"
    assert run(["example", "--name", "intro-s3-f7", "--out", str(path)]) == 0
    return str(path)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ("FSL_ORDER_CAP", "FSL_INTERVAL_BOUND", "FSL_STRICT"):
        monkeypatch.delenv(var, raising=False)


def out_lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_check_la1(groups, capsys):
    assert run(["check", groups, "--group", "s4", "--class", "La(1)"]) == 0
    assert out_lines(capsys) == ["false"]
    assert run(["check", groups, "--group", "a4", "--class", "La(1)"]) == 0
    assert out_lines(capsys) == ["true"]


def test_check_sylow_classes(groups, capsys):
    assert run(["check", groups, "--group", "s4", "--class", "wstar:supersoluble"]) == 0
    lines = out_lines(capsys)
    assert lines[0] == "false" and "p=3" in lines[-1]
    assert run(["check", groups, "--group", "s4", "--class", "wstar:supersoluble", "--pi", "2"]) == 0
    assert out_lines(capsys)[0] == "true"
    assert run(["check", groups, "--group", "s4", "--class", "Wbar:N^2"]) == 0
    assert out_lines(capsys)[0] == "true"


def test_analyze(groups, capsys):
    assert run(["analyze", groups, "--group", "s4"]) == 0
    text = capsys.readouterr().out
    assert "order: 24" in text and "nilpotent_length: 3" in text and "p_lengths: 2=2 3=1" in text
    assert "La(1)=false" in text
    assert run(["analyze", groups, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [d["name"] for d in data] == ["s4", "a4"]
    assert data[1]["formations"]["La(1)"] is True


def test_subnormal_intro(intro_file, capsys, tmp_path):
    from fsubnormal.builder import named_example
    from fsubnormal.structure import sylow

    G = named_example("intro-s3-f7")
    q = sylow(G, 3).generators[0]
    gen = " ".join(map(str, q.images))
    assert run(["subnormal", intro_file, "--sub", gen, "--kind", "skf", "--formation", "supersoluble"]) == 0
    assert out_lines(capsys) == ["false"]
    out = tmp_path / "cert.json"
    assert run(["subnormal", intro_file, "--sub", gen, "--kind", "kf", "--formation", "U", "--out", str(out)]) == 0
    assert out_lines(capsys) == ["true"]
    cert = json.loads(out.read_text())
    assert cert["orders"] == [3, 147, 294] and cert["formation"] == "supersoluble"


def test_subnormal_prints_certificate(groups, capsys):
    assert run(["subnormal", groups, "--group", "s4", "--sub", "2 1 4 3", "--kind", "sn"]) == 0
    lines = out_lines(capsys)
    assert lines[0] == "true" and json.loads(lines[1])["steps"] == ["NormalStep", "NormalStep"]
    assert run(["subnormal", groups, "--group", "s4", "--sub", "", "--kind", "p"]) == 0
    assert out_lines(capsys)[0] == "true"


def test_example_reparses(capsys):
    assert run(["example", "--name", "intro-s3-f7"]) == 0
    ((name, G),) = parse(capsys.readouterr().out)
    assert name == "intro-s3-f7" and G.order == 294


def test_verify_exit_status(tmp_path, groups, capsys):
    report = tmp_path / "r.json"
    assert run(["verify", "--suite", "prop1.3", "--suite", "thm3.4", "--corpus", groups, "--report", str(report)]) == 0
    lines = out_lines(capsys)
    assert len(lines) == 2 and all(line.startswith("PASS") for line in lines)
    data = json.loads(report.read_text())
    assert data["totals"]["failed"] == 0 and data["corpus"]["groups"] == 2


def test_verify_fails_on_counterexample(monkeypatch, groups, capsys):
    from fsubnormal import harness

    monkeypatch.setitem(harness.SUITES, "broken", (lambda run, G: run.check("never", False), ""))
    assert run(["verify", "--suite", "broken", "--corpus", groups]) == 1
    assert out_lines(capsys)[0].startswith("FAIL")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["check", "FILE", "--class", "nope"],
        ["check", "FILE", "--class", "La(1)"],  # two groups, no --group
        ["check", "FILE", "--group", "zz", "--class", "La(1)"],
        ["check", "FILE", "--group", "s4", "--class", "V:N^2"],
        ["check", "FILE", "--group", "s4", "--class", "W:N^2", "--pi", "4"],
        ["subnormal", "FILE", "--group", "s4", "--sub", "1 2", "--kind", "sn"],
        ["subnormal", "FILE", "--group", "s4", "--sub", "x", "--kind", "sn"],
        ["subnormal", "FILE", "--group", "s4", "--sub", "", "--kind", "kf"],
        ["verify", "--suite", "nope"],
        ["--order-cap", "0", "example", "--name", "intro-s3-f7"],
    ],
)
def test_usage_errors_exit_2(argv, groups, capsys):
    argv = [groups if a == "FILE" else a for a in argv]
    assert run(argv) == 2


def test_math_errors_exit_1(tmp_path, groups, capsys):
    bad = tmp_path / "bad.grp"
    bad.write_text("group a\ndegree 3\ngen 1 2\nend\n")
    assert run(["analyze", str(bad)]) == 1
    assert "ParseError" in capsys.readouterr().err
    assert run(["--order-cap", "10", "analyze", groups]) == 1
    assert run(["analyze", str(tmp_path / "missing.grp")]) == 1


def test_environment_configuration(monkeypatch, groups, capsys):
    monkeypatch.setenv("FSL_ORDER_CAP", "10")
    assert run(["analyze", groups]) == 1
    assert run(["--order-cap", "100", "analyze", groups, "--group", "a4"]) == 0
    monkeypatch.setenv("FSL_ORDER_CAP", "ten")
    assert run(["analyze", groups]) == 2
    monkeypatch.delenv("FSL_ORDER_CAP")
    monkeypatch.setenv("FSL_STRICT", "1")
    monkeypatch.setenv("FSL_INTERVAL_BOUND", "1")
    cfg = CliConfig.from_env()
    assert cfg.strict and cfg.interval_bound == 1
    # the interval bound reaches the loaded groups: <(1 2)> needs the interval above D8
    argv = ["subnormal", groups, "--group", "s4", "--sub", "2 1 3 4", "--kind", "kf", "--formation", "N^2"]
    assert run(argv) == 1
    assert run(["--interval-bound", "100", *argv]) == 0


def test_config_rejects_bad_values(monkeypatch):
    monkeypatch.setenv("FSL_INTERVAL_BOUND", "-3")
    with pytest.raises(UsageError):
        CliConfig.from_env()
