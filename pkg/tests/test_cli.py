import json

import numpy as np
import pytest

from relkit import cli, io, suite
from relkit import generators as gen
from relkit.generators import GeneratorConfig
from relkit.relation import LinearRelation
from relkit.report import HYPOTHESIS_VIOLATED, STATEMENTS


def test_suite_is_deterministic():
    cfg = GeneratorConfig(dim=4, seed=42, trials=1)
    assert suite.run_suite(cfg).to_json() == suite.run_suite(cfg).to_json()


def test_suite_report_schema():
    rep = suite.run_suite(GeneratorConfig(dim=4, seed=1, trials=2))
    d = rep.to_dict()
    assert d["schema"] == 1 and d["config"]["seed"] == 1
    assert set(d["summary"]) == {"counts", "max_residual", "by_check"}
    for r in d["results"]:
        assert set(r) == {"trial", "check_id", "paper_ref", "status", "residual", "slack", "details"}
        assert r["paper_ref"] == STATEMENTS[r["check_id"]]
    # every registered statement is exercised by a full run
    assert {r["check_id"] for r in d["results"]} == set(STATEMENTS)


def test_suite_counts_hypothesis_violations():
    rep = suite.run_suite(GeneratorConfig(dim=4, seed=3, trials=10, rel_class="generic"))
    assert rep.summary()["counts"][HYPOTHESIS_VIOLATED] > 0


def test_suite_routes_gamma_class():
    rep = suite.run_suite(GeneratorConfig(dim=4, seed=5, trials=2, rel_class="gamma_admissible"))
    ids = {r.check_id for _, r in rep.results}
    assert {"block_assembly", "w_identities", "gamma_membership"} <= ids
    assert rep.ok


def test_suite_only_known_false_statement_fails():
    rep = suite.run_suite(GeneratorConfig(dim=5, seed=11, trials=10))
    assert {r.check_id for _, r in rep.failures} <= {"block_sv_tail"}
    excluded = suite.run_suite(GeneratorConfig(dim=5, seed=11, trials=10), exclude=("block_sv_tail",))
    assert excluded.ok


def test_timing_only_on_request():
    cfg = GeneratorConfig(dim=3, seed=0, trials=1, rel_class="additive")
    assert "wall_time" not in suite.run_suite(cfg).summary()
    assert suite.run_suite(cfg, timing=True).summary()["wall_time"] >= 0


def test_cli_run_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["run", "--trials", "2", "--seed", "7", "--dim", "4", "--report", str(out),
                     "--exclude", "block_sv_tail"])
    assert code == 0 and json.loads(out.read_text())["schema"] == 1
    assert "passed" in capsys.readouterr().out


def test_cli_run_reports_failure(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["run", "--trials", "1", "--dim", "3", "--report", str(out)]) == 1


def test_cli_tolerance_flags(tmp_path, monkeypatch):
    out = tmp_path / "r.json"
    cli.main(["run", "--trials", "1", "--dim", "3", "--class", "additive", "--tol-eq", "1e-7",
              "--tol-rank", "1e-11", "--report", str(out)])
    tol = json.loads(out.read_text())["config"]["tolerances"]
    assert tol["eps_eq"] == 1e-7 and tol["eps_rank"] == 1e-11
    monkeypatch.setenv("RELKIT_TOL_EQ", "1e-6")
    cli.main(["run", "--trials", "1", "--dim", "3", "--class", "additive", "--report", str(out)])
    assert json.loads(out.read_text())["config"]["tolerances"]["eps_eq"] == 1e-6


@pytest.mark.parametrize("argv", [[], ["run", "--dim", "0"], ["run", "--class", "unitary"],
                                  ["demo", "nope"], ["run", "--tol-eq", "-1"],
                                  ["verify", "missing-a.json", "missing-b.json"]])
def test_cli_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("name", sorted(cli.DEMOS))
def test_demos_exit_zero(name, capsys):
    assert cli.main(["demo", name]) == 0
    assert capsys.readouterr().out


def test_empty_gamma_demo_output(capsys):
    cli.main(["demo", "remark-3-1"])
    out = capsys.readouterr().out
    assert "true for 0 of 100" in out


def test_verify_identical_files(tmp_path, capsys, rng):
    t = gen.self_adjoint_relation(4, rng, mul_dim=1)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    io.save_relation(t, a)
    io.save_relation(t, b)
    assert cli.main(["verify", str(a), str(b)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["gap"]["op_norm"] < 1e-12
    assert {c["check_id"] for c in rep["checks"]} >= {"gap_distance_formula", "resolvent_criterion"}


def test_verify_rectangular(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    io.save_relation(LinearRelation.from_matrix(np.ones((2, 3))), a)
    io.save_relation(LinearRelation.from_matrix(np.zeros((2, 3))), b)
    assert cli.main(["verify", str(a), str(b)]) == 0
    assert json.loads(capsys.readouterr().out)["gap"]["op_norm"] > 0
