import json

import pytest

from qsc import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_paradox_report(capsys):
    code, out, _ = run(capsys, "condorcet", "paradox", "--f", "maj", "--n", "3",
                       "--mode", "exhaustive", "--json")
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"inputs_echo", "results", "std_errors", "verdicts", "runtime_ms",
                        "timestamp"}
    assert rep["results"]["p_paradox"] == pytest.approx(1 / 18, abs=1e-15)
    assert rep["inputs_echo"]["n"] == 3


def test_guilbaud(capsys):
    code, out, _ = run(capsys, "gaussian", "guilbaud", "--json")
    assert json.loads(out)["results"]["guilbaud"] == pytest.approx(0.0877398280459, abs=1e-12)


def test_census_csv(capsys):
    code, out, _ = run(capsys, "manip", "census", "--rule", "borda", "--k", "3", "--n", "2",
                       "--rmax", "3", "--csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "r,fraction" and lines[1].startswith("2,0.3888")


def test_borda_example_text(capsys):
    code, out, _ = run(capsys, "manip", "example")
    assert code == 0 and "results.winner: a" in out and "results.winner_after_lie: c" in out


def test_byte_identical_without_timing(capsys):
    args = ("condorcet", "paradox", "--n", "5", "--mode", "mc", "--samples", "5000",
            "--seed", "3", "--json", "--no-timing")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args, "--threads", "1")
    assert a == b


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "nonsense")[0] == cli.EXIT_USAGE
    assert run(capsys, "manip", "census", "--rule", "approval")[0] == cli.EXIT_USAGE
    assert run(capsys, "analyze", "--f", "maj")[0] == cli.EXIT_USAGE


def test_gate_failure_exits_two(capsys, monkeypatch):
    monkeypatch.setattr(cli, "cmd_gaussian",
                        lambda a: {"results": {}, "verdicts": {"bound": False}})
    p = cli.build_parser()
    for action in p._subparsers._group_actions[0].choices["gaussian"]._actions:
        if action.dest == "handler":
            action.default = cli.cmd_gaussian
    assert run(capsys, "gaussian", "guilbaud")[0] == cli.EXIT_GATE


def test_manifest_toml_and_json(tmp_path, capsys):
    toml = tmp_path / "m.toml"
    toml.write_text('command = ["condorcet", "paradox"]\n[args]\nf = "maj"\nn = 5\n'
                    'mode = "exhaustive"\n')
    code, out, _ = run(capsys, "run", str(toml), "--json")
    assert code == 0 and json.loads(out)["results"]["p_paradox"] == pytest.approx(5 / 72)
    js = tmp_path / "m.json"
    js.write_text(json.dumps({"command": "aggregate jury", "args": {"p": 0.6, "nmax": 5},
                              "output": str(tmp_path / "out.json")}))
    code, _, _ = run(capsys, "run", str(js))
    assert code == 0
    saved = json.loads((tmp_path / "out.json").read_text())
    assert saved["verdicts"]["strictly_increasing"] is True


def test_manifest_argv():
    argv = cli.manifest_argv({"command": ["dynamics", "run"],
                              "args": {"p": 0.6, "no_timing": True, "ps": [0.5, 0.6]}})
    assert argv == ["dynamics", "run", "--p", "0.6", "--no-timing", "--ps", "0.5,0.6"]


@pytest.mark.parametrize("argv", [
    ["analyze", "--f", "tribes:r=2,m=2"],
    ["stability", "--family", "majority", "--sizes", "3,5,7"],
    ["condorcet", "classify", "--f", "dictator", "--n", "3"],
    ["condorcet", "gaussian-arrow", "--samples", "20000"],
    ["condorcet", "constitution", "--k", "4", "--f", "maj", "--n", "3"],
    ["gaussian", "jrho", "--x", "0.5", "--y", "0.5", "--rho", "0.5"],
    ["gaussian", "borell", "--samples", "20000"],
    ["gaussian", "tournament", "--k", "4", "--samples", "20000"],
    ["manip", "witness", "--rule", "plurality"],
    ["manip", "distance", "--rule", "borda"],
    ["manip", "congestion", "--k", "4"],
    ["dynamics", "run", "--graph", "torus:rows=6,cols=6"],
    ["dynamics", "retention", "--graph", "random_regular:d=3,n=40,seed=1", "--samples", "20"],
    ["aggregate", "neyman-pearson"],
    ["aggregate", "tree", "--r", "3", "--samples", "20000"],
    ["aggregate", "effects", "--f", "maj", "--n", "3"],
    ["aggregate", "kkl", "--r", "3"],
])
def test_every_action_succeeds(capsys, argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    assert json.loads(out)["verdicts"] is not None


def test_derivatives_csv(capsys):
    code, out, _ = run(capsys, "gaussian", "derivatives", "--grid", "3", "--rhos", "0.5",
                       "--csv")
    assert code == 0 and len(out.splitlines()) == 1 + 9 * 3
