import json
import subprocess
import sys
from pathlib import Path

import pytest

from ncsync.cli import main
from ncsync.topology import path_graph


@pytest.fixture
def path3_file(tmp_path):
    p = tmp_path / "path3.json"
    path_graph(3).save(p)
    return p


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "ncsync.cli", *args], capture_output=True, text=True
    )


class TestSimulate:
    def test_path3_c_dbs_summary(self, path3_file, capsys):
        rc = main(["simulate", "--topology", str(path3_file), "--scheme", "c-dbs",
                   "--pe", "0", "--seed", "1"])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "slots=4 converged=true"

    def test_trace_output(self, path3_file, tmp_path, capsys):
        trace = tmp_path / "trace.jsonl"
        rc = main(["simulate", "--topology", str(path3_file), "--scheme", "u-dbs",
                   "--pe", "0", "--seed", "1", "--trace", str(trace)])
        assert rc == 0
        lines = [json.loads(x) for x in trace.read_text().splitlines()]
        assert len(lines) == 5
        assert all(len(l["components"]) == 1 for l in lines)

    def test_invalid_pe_exits_2(self, path3_file):
        r = run_cli(["simulate", "--topology", str(path3_file), "--scheme", "c-dbs",
                     "--pe", "1.5"])
        assert r.returncode == 2
        assert "--pe" in r.stderr

    def test_missing_topology_exits_2(self, tmp_path):
        r = run_cli(["simulate", "--topology", str(tmp_path / "nope.json"),
                     "--scheme", "c-dbs"])
        assert r.returncode == 2
        assert "--topology" in r.stderr

    def test_unknown_flag_exits_2(self, path3_file):
        r = run_cli(["simulate", "--topology", str(path3_file), "--scheme", "c-dbs",
                     "--bogus"])
        assert r.returncode == 2

    def test_identical_invocations_identical_output(self, path3_file, tmp_path):
        traces = []
        for name in ("a.jsonl", "b.jsonl"):
            t = tmp_path / name
            r = run_cli(["simulate", "--topology", str(path3_file), "--scheme",
                         "c-dbs-ns", "--pe", "0.3", "--seed", "9", "--trace", str(t)])
            assert r.returncode == 0
            traces.append(t.read_bytes())
        assert traces[0] == traces[1]


class TestSweep:
    def test_sweep_from_toml(self, tmp_path, capsys):
        cfgf = tmp_path / "sweep.toml"
        cfgf.write_text(
            "node_sizes = [5]\npe_values = [0.0]\nradius_grid = [1.414]\n"
            "samples_per_cell = 5\nroot_seed = 3\n"
        )
        out = tmp_path / "results.csv"
        js = tmp_path / "results.json"
        rc = main(["sweep", "--config", str(cfgf), "--out", str(out), "--json", str(js)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ("scheme,n,pe,degree_bucket,n_samples,mean_slots,"
                            "mean_rpg,mean_ops,convergence_rate")
        assert len(lines) > 1
        assert json.loads(js.read_text())

    def test_bad_config_exits_2(self, tmp_path):
        cfgf = tmp_path / "bad.json"
        cfgf.write_text('{"node_sizes": []}')
        r = run_cli(["sweep", "--config", str(cfgf), "--out", str(tmp_path / "o.csv")])
        assert r.returncode == 2


class TestFixturesAndHelp:
    def test_fixtures_written(self, tmp_path, capsys):
        rc = main(["fixtures", "--out", str(tmp_path / "fx")])
        assert rc == 0
        names = sorted(p.name for p in (tmp_path / "fx").iterdir())
        assert names == ["k3.json", "k4.json", "k5.json", "path3.json", "star5.json"]

    def test_help_exits_0_and_names_flags(self):
        r = run_cli(["simulate", "--help"])
        assert r.returncode == 0
        for flag in ("--topology", "--scheme", "--pe", "--seed", "--trace"):
            assert flag in r.stdout
        r = run_cli(["--help"])
        assert r.returncode == 0
