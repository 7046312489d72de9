"""End-to-end CLI behavior through in-process main(argv): output formats,
exit codes, seed echoing, and agreement with the library calls each
subcommand wraps."""

import dataclasses
import json

import pytest

from subalign import experiments
from subalign.analysis import (
    default_typicality_eps,
    exact_structural_entropy,
    structural_entropy_bounds,
)
from subalign.cli import REGION_CSV_HEADER, build_parser, main
from subalign.graphs import complete_graph, cycle_graph, format_edge_list, path_graph
from subalign.model import ModelParams, parse_pair, sample_pair, save_pair, verify_pair


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- analytic subcommands ---------------------------------------------------


def test_margins_human_output(capsys):
    code, out, err = run_cli(capsys, "margins", "--n", "100", "--m", "50", "--p", "0.5")
    assert code == 0 and err == ""
    lines = out.strip().split("\n")
    values = {ln.split()[0]: float(ln.split()[1]) for ln in lines}
    assert values["ach"] == pytest.approx(12.7235, abs=1e-4)
    assert values["conv"] == pytest.approx(16.6355, abs=1e-4)
    assert values["perm"] == pytest.approx(21.0880, abs=1e-4)


def test_margins_csv_output(capsys):
    code, out, _ = run_cli(
        capsys, "margins", "--n", "100", "--m", "50", "--p", "0.5", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,m,p,ach_margin,conv_margin,perm_margin"
    fields = lines[1].split(",")
    assert fields[:3] == ["100", "50", "0.5"]
    assert float(fields[3]) == pytest.approx(12.7235, abs=1e-4)


def test_region_grid_csv(capsys):
    code, out, _ = run_cli(
        capsys,
        "region",
        "--n", "12", "--m", "3,10", "--p", "0.02,0.5", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == REGION_CSV_HEADER
    assert len(lines) == 5  # 1 x 2 x 2 grid
    by_key = {tuple(ln.split(",")[:3]): ln.split(",") for ln in lines[1:]}
    assert by_key[("12", "3", "0.02")][6] == "converse_set"
    assert by_key[("12", "10", "0.5")][6] == "achievable"
    assert by_key[("12", "10", "0.5")][7] == "achievable"


def test_region_human_lines(capsys):
    code, out, _ = run_cli(capsys, "region", "--n", "12", "--m", "10", "--p", "0.5")
    assert code == 0
    assert out.count("\n") == 1
    assert "set=achievable" in out and "perm_region=achievable" in out


def test_bounds_with_exact(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--n", "6", "--p", "0.3", "--exact")
    assert code == 0
    got = {ln.split()[0]: ln.split()[1] for ln in out.strip().split("\n")}
    b = structural_entropy_bounds(6, 0.3)
    assert float(got["upper"]) == pytest.approx(b.upper, rel=1e-12)
    assert float(got["asymptotic"]) == pytest.approx(b.asymptotic, rel=1e-12)
    assert got["asymptotic_valid"] == "true"  # 6 * 0.3 = 1.8 > log 6
    assert float(got["exact"]) == pytest.approx(exact_structural_entropy(6, 0.3), rel=1e-12)


def test_bounds_csv_column_set_depends_on_exact(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--n", "6", "--p", "0.3", "--format", "csv")
    assert code == 0
    assert out.startswith("n,p,upper,asymptotic,asymptotic_valid\n")
    assert len(out.strip().split("\n")[1].split(",")) == 5
    code, out, _ = run_cli(
        capsys, "bounds", "--n", "6", "--p", "0.3", "--format", "csv", "--exact"
    )
    assert out.startswith("n,p,upper,asymptotic,asymptotic_valid,exact\n")
    assert len(out.strip().split("\n")[1].split(",")) == 6


def test_bounds_exact_above_cap_is_a_cap_error(capsys):
    code, out, err = run_cli(capsys, "bounds", "--n", "9", "--p", "0.3", "--exact")
    assert code == 3
    assert out == "" and err.startswith("error:")


# -- gen / verify -------------------------------------------------------------


def test_gen_is_seed_deterministic(capsys):
    args = ("gen", "--n", "9", "--m", "4", "--p", "0.3", "--seed", "7")
    code, first, err = run_cli(capsys, *args)
    assert code == 0 and err == ""
    code, second, _ = run_cli(capsys, *args)
    assert first == second
    pair = parse_pair(first)
    assert verify_pair(pair)
    assert pair.base.order == 9 and len(pair.chosen_set) == 4
    for section in ("[base]", "[S]", "[pi]", "[anonymized]"):
        assert section in first


def test_gen_without_seed_echoes_one(capsys):
    code, out, _ = run_cli(capsys, "gen", "--n", "7", "--m", "3", "--p", "0.4")
    assert code == 0
    head, rest = out.split("\n", 1)
    assert head.startswith("seed ")
    seed = int(head.removeprefix("seed "))
    code, replay, _ = run_cli(
        capsys, "gen", "--n", "7", "--m", "3", "--p", "0.4", "--seed", str(seed)
    )
    assert replay == rest


def test_gen_to_file_and_verify_roundtrip(tmp_path, capsys):
    bundle = tmp_path / "pair.txt"
    code, out, _ = run_cli(
        capsys, "gen", "--n", "8", "--m", "3", "--p", "0.5", "--seed", "21",
        "--out", str(bundle),
    )
    assert code == 0 and out == ""
    code, out, _ = run_cli(capsys, "verify", "--pair", str(bundle))
    assert code == 0 and out == "ok\n"


def test_verify_flags_inconsistent_bundle(tmp_path, capsys):
    pair = sample_pair(ModelParams(8, 3, 0.5), 21)
    broken = dataclasses.replace(pair, anonymized=pair.anonymized.complement())
    path = tmp_path / "broken.txt"
    save_pair(broken, path)
    code, out, _ = run_cli(capsys, "verify", "--pair", str(path))
    assert code == 1
    assert out.startswith("mismatch")


def test_gen_rejects_bad_params(capsys):
    code, _, err = run_cli(capsys, "gen", "--n", "4", "--m", "4", "--p", "0.5", "--seed", "1")
    assert code == 1 and err.startswith("error:")


# -- solve / count / aut ---------------------------------------------------------


def test_solve_lists_candidates_and_summary(tmp_path, capsys):
    base = tmp_path / "base.txt"
    base.write_text(format_edge_list(path_graph(3)))
    code, out, _ = run_cli(capsys, "solve", "--base", str(base), "--pattern", "k2")
    assert code == 0
    # sigma entries are pattern labels (1-based), not base vertex ids
    assert out.split("\n")[:4] == [
        "S=[1,2] sigma=[1,2]",
        "S=[1,2] sigma=[2,1]",
        "S=[2,3] sigma=[1,2]",
        "S=[2,3] sigma=[2,1]",
    ]
    assert out.endswith(
        experiments.SOLVE_SUMMARY_HEADER + "\n" + "4,2,false,1-2,1-2\n"
    )
    code, csv_out, _ = run_cli(
        capsys, "solve", "--base", str(base), "--pattern", "k2", "--format", "csv"
    )
    assert csv_out == experiments.SOLVE_SUMMARY_HEADER + "\n" + "4,2,false,1-2,1-2\n"


def test_solve_limit_marks_truncation(tmp_path, capsys):
    base = tmp_path / "k5.txt"
    base.write_text(format_edge_list(complete_graph(5)))
    code, out, _ = run_cli(
        capsys, "solve", "--base", str(base), "--pattern", "k3",
        "--limit", "2", "--format", "csv",
    )
    assert code == 0
    record = out.strip().split("\n")[1].split(",")
    assert record[1] == "2" and record[2] == "true"


def test_count_value_witnesses_and_csv(tmp_path, capsys):
    base = tmp_path / "c5.txt"
    base.write_text(format_edge_list(cycle_graph(5)))
    code, out, _ = run_cli(capsys, "count", "--base", str(base), "--pattern", "p3")
    assert code == 0 and out == "5\n"
    code, out, _ = run_cli(
        capsys, "count", "--base", str(base), "--pattern", "p3", "--witnesses"
    )
    lines = out.strip().split("\n")
    assert lines[0] == "5" and len(lines) == 6
    assert lines[1] == "S=[1,2,3]"
    code, out, _ = run_cli(
        capsys, "count", "--base", str(base), "--pattern", "p3", "--format", "csv"
    )
    assert out == "count\n5\n"


def test_aut_methods_and_formats(capsys):
    code, out, _ = run_cli(capsys, "aut", "--graph", "p4")
    assert code == 0 and out == "2\n"
    code, out, _ = run_cli(capsys, "aut", "--graph", "p4", "--method", "brute")
    assert out == "2\n"
    code, out, _ = run_cli(capsys, "aut", "--graph", "c5", "--format", "csv")
    assert out == "aut_count\n10\n"


def test_aut_cap_exit_code(capsys):
    code, out, err = run_cli(capsys, "aut", "--graph", "e21")
    assert code == 3 and out == "" and err.startswith("error:")


def test_missing_graph_file_is_io_error(capsys):
    code, _, err = run_cli(capsys, "solve", "--base", "/no/such/file.txt", "--pattern", "k2")
    assert code == 2 and err.startswith("error:")


def test_usage_problems_are_domain_errors(capsys):
    assert run_cli(capsys, "margins", "--n", "10")[0] == 1
    assert run_cli(capsys, "frobnicate")[0] == 1
    assert run_cli(capsys, "validate", "nonsense", "--m", "4", "--p", "0.5")[0] == 1


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("subalign ")


# -- sweep ------------------------------------------------------------------------


SWEEP_ARGS = ["--n", "6", "--m", "3", "--p", "0.2,0.5", "--trials", "25", "--seed", "99"]


def expected_sweep_csv() -> str:
    spec = experiments.SweepSpec(
        grid=(ModelParams(6, 3, 0.2), ModelParams(6, 3, 0.5)),
        trials_per_point=25,
        master_seed=99,
    )
    return experiments.render_sweep_csv(experiments.run_sweep(spec), 99)


def test_sweep_stdout_matches_library(capsys):
    code, out, _ = run_cli(capsys, "sweep", *SWEEP_ARGS)
    assert code == 0
    assert out == expected_sweep_csv()


def test_sweep_workers_flag_preserves_bytes(capsys):
    code, out, _ = run_cli(capsys, "sweep", *SWEEP_ARGS, "--workers", "2")
    assert code == 0
    assert out == expected_sweep_csv()


def test_sweep_writes_file_and_manifest(tmp_path, capsys):
    out_path = tmp_path / "grid.csv"
    code, out, _ = run_cli(capsys, "sweep", *SWEEP_ARGS, "--out", str(out_path))
    assert code == 0 and out == ""
    assert out_path.read_text() == expected_sweep_csv()
    manifest = json.loads((tmp_path / "grid.csv.manifest.json").read_text())
    assert manifest["master_seed"] == 99
    assert manifest["grid"][0] == {"n": 6, "m": 3, "p": 0.2}


def test_sweep_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(
        "# recovery probe\n"
        "n = 6\n"
        "m = 3\n"
        "p = 0.2,0.5\n"
        "trials = 25\n"
        "seed = 1\n"
    )
    code, out, _ = run_cli(capsys, "sweep", "--config", str(cfg), "--seed", "99")
    assert code == 0
    assert out == expected_sweep_csv()  # the explicit flag beats the config seed


def test_sweep_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n = 6\nm = 3\np = 0.5\ntrials = 5\nbogus = 1\n")
    code, _, err = run_cli(capsys, "sweep", "--config", str(cfg))
    assert code == 1 and "bogus" in err


def test_sweep_requires_a_grid(capsys):
    code, _, err = run_cli(capsys, "sweep", "--trials", "5", "--seed", "1")
    assert code == 1 and err.startswith("error:")


def test_sweep_auto_seed_lands_in_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--n", "5", "--m", "2", "--p", "0.5", "--trials", "5")
    assert code == 0
    head, rest = out.split("\n", 1)
    seed = int(head.removeprefix("seed "))
    assert rest.startswith(experiments.SWEEP_CSV_HEADER + "\n")
    assert rest.strip().split("\n")[1].split(",")[4] == str(seed)


# -- validate -----------------------------------------------------------------------


def test_validate_expectation_csv_matches_library(capsys):
    code, out, _ = run_cli(
        capsys, "validate", "expectation",
        "--n", "6", "--pattern", "k2", "--p", "0.5",
        "--trials", "300", "--seed", "4", "--format", "csv",
    )
    assert code == 0
    report = experiments.validate_expectation(6, complete_graph(2), 0.5, 300, 4, label="k2")
    assert out == experiments.expectation_csv([report])


def test_validate_expectation_human(capsys):
    code, out, _ = run_cli(
        capsys, "validate", "expectation",
        "--n", "6", "--pattern", "k2", "--p", "0.5", "--trials", "300", "--seed", "4",
    )
    assert code == 0
    keys = [ln.split()[0] for ln in out.strip().split("\n")]
    assert keys == ["empirical_mean", "expected_mean", "std_error", "abs_diff", "passed"]


def test_validate_chernoff_defaults_eps(capsys):
    code, out, _ = run_cli(
        capsys, "validate", "chernoff", "--m", "12", "--p", "0.25",
        "--trials", "500", "--seed", "3",
    )
    assert code == 0
    got = dict(ln.split() for ln in out.strip().split("\n"))
    assert float(got["eps"]) == pytest.approx(default_typicality_eps(12, 0.25), rel=1e-12)
    assert got["passed"] in {"true", "false"}


def test_validate_rigidity_csv(capsys):
    code, out, _ = run_cli(
        capsys, "validate", "rigidity", "--m", "8", "--p", "0.5",
        "--trials", "200", "--seed", "6", "--format", "csv",
    )
    assert code == 0
    report = experiments.validate_rigidity(8, 0.5, 200, 6)
    assert out == experiments.rigidity_csv([report])


def test_validate_missing_flags_fail_cleanly(capsys):
    code, _, err = run_cli(capsys, "validate", "expectation", "--p", "0.5", "--seed", "1")
    assert code == 1 and err.startswith("error:")


def test_parser_builds_help_for_every_subcommand():
    parser = build_parser()
    text = parser.format_help()
    for name in ("gen", "solve", "count", "aut", "verify", "margins",
                 "region", "bounds", "sweep", "validate"):
        assert name in text
