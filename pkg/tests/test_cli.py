import io
import re

import pytest

from qapga.cli import main

TINY1 = "1\n3\n7\n"
TINY2 = "2\n0 1\n1 0\n0 3\n3 0\n"


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    status = main(argv, out=out, err=err)
    return status, out.getvalue(), err.getvalue()


@pytest.fixture
def tiny1_path(tmp_path):
    p = tmp_path / "tiny1.dat"
    p.write_text(TINY1)
    return p


class TestSolve:
    def test_n1_instance(self, tiny1_path):
        status, out, err = invoke(["solve", str(tiny1_path), "--seed", "7",
                                   "--generations", "3", "--pop", "2"])
        assert status == 0
        assert "cost: 21" in out
        assert "best permutation: 1" in out

    def test_permutation_printed_one_based(self, tmp_path):
        p = tmp_path / "tiny2.dat"
        p.write_text(TINY2)
        status, out, _ = invoke(["solve", str(p), "--generations", "2", "--pop", "4"])
        assert status == 0
        perm = re.search(r"best permutation: (.+)", out).group(1)
        assert sorted(perm.split()) == ["1", "2"]

    def test_unreadable_file_exits_2(self):
        status, out, err = invoke(["solve", "/nonexistent/foo.dat"])
        assert status == 2
        assert "cannot read" in err

    def test_malformed_file_exits_2(self, tmp_path):
        p = tmp_path / "bad.dat"
        p.write_text("2\n0 1\n1 0\n0 3\n")
        status, _, err = invoke(["solve", str(p)])
        assert status == 2
        assert "matrix entries" in err

    def test_unknown_flag_exits_1(self, tiny1_path):
        status, _, err = invoke(["solve", str(tiny1_path), "--frobnicate"])
        assert status == 1
        assert "usage" in err

    def test_missing_subcommand_exits_1(self):
        status, _, err = invoke([])
        assert status == 1


class TestOracle:
    def test_small_instance(self, tmp_path):
        p = tmp_path / "tiny2.dat"
        p.write_text(TINY2)
        status, out, _ = invoke(["oracle", str(p)])
        assert status == 0
        assert "optimum: 6" in out
        assert "argmin: 1 2" in out
        assert "explored: 2" in out

    def test_refuses_large_instance(self, tmp_path):
        n = 20
        rows = "\n".join(" ".join("1" for _ in range(n)) for _ in range(n))
        p = tmp_path / "big.dat"
        p.write_text(f"{n}\n{rows}\n{rows}\n")
        status, _, err = invoke(["oracle", str(p)])
        assert status == 2
        assert "refusing" in err


class TestBench:
    def test_report_matches_run_suite(self, tmp_path):
        inst_dir = tmp_path / "qaplib"
        inst_dir.mkdir()
        (inst_dir / "mini.dat").write_text(TINY1)
        baselines = tmp_path / "baselines.csv"
        baselines.write_text("name,best_known,source\nmini,21,exact\n")
        status, out, _ = invoke([
            "bench", "--dir", str(inst_dir), "--baselines", str(baselines),
            "--seeds", "1..3", "--pop", "2", "--generations", "2",
        ])
        assert status == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("instance,seeds,best_found")
        assert lines[1].startswith("mini,3,21,21,0.000000,")

    def test_out_file_and_json(self, tmp_path):
        inst_dir = tmp_path / "qaplib"
        inst_dir.mkdir()
        (inst_dir / "mini.dat").write_text(TINY1)
        baselines = tmp_path / "baselines.csv"
        baselines.write_text("name,best_known,source\nmini,21,exact\n")
        report = tmp_path / "report.json"
        status, out, _ = invoke([
            "bench", "--dir", str(inst_dir), "--baselines", str(baselines),
            "--seeds", "1,2", "--pop", "2", "--generations", "2",
            "--format", "json", "--out", str(report),
        ])
        assert status == 0
        assert out == ""
        import json
        payload = json.loads(report.read_text())
        assert payload[0]["instance"] == "mini"
        assert payload[0]["best_found"] == 21

    def test_stdout_deterministic_across_runs(self, tmp_path):
        inst_dir = tmp_path / "qaplib"
        inst_dir.mkdir()
        (inst_dir / "mini.dat").write_text(TINY1)
        baselines = tmp_path / "baselines.csv"
        baselines.write_text("name,best_known,source\nmini,21,exact\n")
        argv = ["bench", "--dir", str(inst_dir), "--baselines", str(baselines),
                "--seeds", "1..2", "--pop", "2", "--generations", "2"]
        _, out_a, _ = invoke(argv)
        _, out_b, _ = invoke(argv)
        strip_time = lambda text: [line.rsplit(",", 1)[0] for line in text.splitlines()]
        assert strip_time(out_a) == strip_time(out_b)

    def test_empty_dir_exits_2(self, tmp_path):
        inst_dir = tmp_path / "empty"
        inst_dir.mkdir()
        baselines = tmp_path / "baselines.csv"
        baselines.write_text("name,best_known,source\nmini,21,exact\n")
        status, _, err = invoke(["bench", "--dir", str(inst_dir),
                                 "--baselines", str(baselines)])
        assert status == 2
        assert "no .dat files" in err

    def test_bad_seeds_exits_1(self, tmp_path):
        status, _, err = invoke(["bench", "--dir", str(tmp_path),
                                 "--baselines", str(tmp_path / "x.csv"),
                                 "--seeds", ""])
        assert status == 1


def test_cli_defaults_mirror_config_defaults():
    from qapga import GaConfig
    from qapga.cli import _build_parser
    defaults = GaConfig()
    args = _build_parser().parse_args(["solve", "dummy.dat"])
    assert args.pop == defaults.population_size
    assert args.generations == defaults.max_generations
    assert args.cx_rate == defaults.crossover_rate
    assert args.mut_rate == defaults.mutation_rate
    assert args.elitism == defaults.elitism_count
    assert args.seed == defaults.rng_seed


class TestConfigFlag:
    def test_config_file_sets_defaults(self, tmp_path, tiny1_path):
        cfg = tmp_path / "ga.conf"
        cfg.write_text("max_generations = 4\npopulation_size = 2\nrng_seed = 11\n")
        status, out, _ = invoke(["solve", str(tiny1_path), "--config", str(cfg)])
        assert status == 0
        assert "cost: 21" in out

    def test_explicit_flag_overrides_config(self, tmp_path, tiny1_path):
        cfg = tmp_path / "ga.conf"
        cfg.write_text("max_generations = 4\npopulation_size = 2\ntarget_cost = 21\n")
        status, out, _ = invoke(["solve", str(tiny1_path), "--config", str(cfg),
                                 "--generations", "1"])
        assert status == 0
        assert "generations: 0" in out  # target met in the initial population

    def test_bad_config_exits_2(self, tmp_path, tiny1_path):
        cfg = tmp_path / "ga.conf"
        cfg.write_text("nonsense = 1\n")
        status, _, err = invoke(["solve", str(tiny1_path), "--config", str(cfg)])
        assert status == 2
        assert "unknown config key" in err
