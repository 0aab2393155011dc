import subprocess
import sys
from pathlib import Path

import pytest

from rqc.cli import main

DEMOS = Path(__file__).parents[1] / "demos"


@pytest.fixture
def graphs(tmp_path):
    out = {}
    for name, args in {"cycle8": ["cycle", "8"], "wheel6": ["wheel", "6"],
                       "fig1b": ["fig1b"], "k66": ["bipartite12"]}.items():
        p = tmp_path / f"{name}.txt"
        assert main(["gen-graph", *args, "-o", str(p)]) == 0
        out[name] = str(p)
    return out


class TestCheck:
    def test_cycle_holds_with_four_hops(self, graphs, capsys):
        assert main(["check", graphs["cycle8"], "--r", "2", "--s", "2", "--l", "4", "--f", "1"]) == 0
        out = capsys.readouterr().out
        assert "verdict: holds" in out and "witness: none" in out and "elapsed_ms:" in out

    def test_cycle_fails_with_three_hops(self, graphs, capsys):
        assert main(["check", graphs["cycle8"], "--r", "2", "--s", "2", "--l", "3", "--f", "1"]) == 1
        out = capsys.readouterr().out
        assert "verdict: fails" in out and "witness: V1=" in out and "pairs_checked:" in out

    def test_wheel_strict(self, graphs):
        for g in ("wheel6", "fig1b"):
            assert main(["check", graphs[g], "--strict", "--r", "2", "--l", "2", "--f", "1"]) == 0
            assert main(["check", graphs[g], "--strict", "--r", "2", "--l", "1", "--f", "1"]) == 1

    def test_sampled(self, graphs, capsys):
        args = ["check", graphs["cycle8"], "--r", "2", "--s", "2", "--f", "1", "--sample", "100"]
        assert main(args + ["--l", "1"]) == 1
        assert main(args + ["--l", "4"]) == 0
        assert "not a proof" in capsys.readouterr().out

    def test_local_model(self, graphs):
        assert main(["check", graphs["cycle8"], "--r", "2", "--s", "2", "--l", "1", "--f", "1",
                     "--model", "local"]) == 1

    def test_malformed_file(self, tmp_path, capsys):
        p = tmp_path / "bad.txt"
        p.write_text("n 3\n0 1\n0 9\n")
        assert main(["check", str(p), "--r", "1", "--l", "1", "--f", "0"]) == 2
        assert "line 3" in capsys.readouterr().err

    def test_usage_errors(self, graphs):
        assert main(["check", graphs["cycle8"], "--l", "1", "--f", "1"]) == 2
        assert main(["check", "missing.txt", "--r", "1", "--l", "1", "--f", "0"]) == 2
        assert main(["check", graphs["cycle8"], "--r", "0", "--l", "1", "--f", "0"]) == 2
        assert main(["frobnicate"]) == 2


class TestRun:
    def test_template_writes_identical_csvs(self, tmp_path, capsys):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            assert main(["run", str(DEMOS / "scenario_template.toml"), "--seeds", "0..2",
                         "--csv", str(d), "--plotdata", str(d / "plot")]) == 0
        files = sorted(p.name for p in a.glob("*.csv"))
        assert len(files) == 3
        for name in files:
            assert (a / name).read_bytes() == (b / name).read_bytes()
        plot = (a / "plot" / "cycle8_sine_seed0_values.csv").read_text().splitlines()
        assert plot[0] == "k,x0,x1,x2,x3,x4,x5,x6,x7"
        assert "consensus_rate: 1.00" in capsys.readouterr().out

    def test_seed_env(self, monkeypatch, capsys):
        monkeypatch.setenv("RQC_SEED", "10")
        assert main(["run", str(DEMOS / "scenario_template.toml"), "--seeds", "0..1",
                     "--seed-env", "--verbose"]) == 0
        out = capsys.readouterr().out
        assert "seed 10:" in out and "seed 11:" in out
        monkeypatch.setenv("RQC_SEED", "x")
        assert main(["run", str(DEMOS / "scenario_template.toml"), "--seed-env"]) == 2

    def test_trivial_single_node(self, tmp_path, capsys):
        p = tmp_path / "one.toml"
        p.write_text('l = 1\nf = 0\nx0 = [3]\n[graph]\nedges = []\nn = 1\n')
        assert main(["run", str(p), "--verbose"]) == 0
        assert "consensus_time=0" in capsys.readouterr().out

    def test_invalid_scenario(self, tmp_path, capsys):
        p = tmp_path / "bad.toml"
        p.write_text('l = 0\nf = 0\nx0 = [3]\n[graph]\nedges = []\nn = 1\n')
        assert main(["run", str(p)]) == 2
        assert "scenario" in capsys.readouterr().err

    def test_parallel_matches_serial(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["run", str(DEMOS / "scenario_template.toml"), "--seeds", "0..3", "--csv", str(a)])
        main(["run", str(DEMOS / "scenario_template.toml"), "--seeds", "0..3", "--csv", str(b),
              "--workers", "2"])
        for p in a.glob("*.csv"):
            assert p.read_bytes() == (b / p.name).read_bytes()


class TestRepro:
    @pytest.mark.parametrize("preset", ["fig3_4hop", "fig3_1hop", "fig5_delays"])
    def test_presets_pass(self, preset, capsys):
        assert main(["repro", preset, "--seeds", "0..4"]) == 0
        assert f"{preset}: PASS" in capsys.readouterr().out

    def test_lemma_table(self, capsys):
        assert main(["lemma-table"]) == 0
        out = capsys.readouterr().out
        assert "C8" in out and "W6" in out and "K3,3" in out and "FAIL" not in out


def test_gen_graph_stdout(capsys):
    assert main(["gen-graph", "bipartite", "2", "--n2", "3"]) == 0
    out = capsys.readouterr().out
    assert "n 5" in out and "u 0 2" in out


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "rqc.cli", "gen-graph", "cycle", "4"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.splitlines()[1] == "n 4"


def test_help_documents_defaults(capsys):
    with pytest.raises(SystemExit):
        from rqc.cli import build_parser

        build_parser().parse_args(["run", "--help"])
    assert "default" in capsys.readouterr().out
