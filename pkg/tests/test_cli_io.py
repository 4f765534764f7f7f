"""Seed mixing, file formats, report JSON, and the CLI surface."""

import json
import shlex

import numpy as np
import pytest

import specgraph as sg
import specgraph.io as sgio
from specgraph.cli import main
from specgraph.errors import EdgeListParseError


class TestDeriveTrialSeed:
    def test_zero_fixed_point(self):
        assert sg.derive_trial_seed(0, 0) == 0

    def test_reference_vector(self):
        assert sg.derive_trial_seed(0, 1) == 0xE220A8397B1DCDAF

    def test_injective_over_indices(self):
        seen = {sg.derive_trial_seed(42, i) for i in range(10_000)}
        assert len(seen) == 10_000

    def test_stays_in_64_bits(self):
        for i in (0, 1, 2**31, 2**40):
            assert 0 <= sg.derive_trial_seed(2**64 - 1, i) < 2**64


class TestEdgeList:
    def test_single_edge_format(self, tmp_path):
        g = sg.Graph(n=2, edges=((0, 1),), model=sg.GraphModel.external())
        path = tmp_path / "g.txt"
        sg.write_edge_list(g, path)
        assert path.read_text() == "2 1\n0 1\n"

    def test_empty_graph_format(self, tmp_path):
        g = sg.Graph(n=3, edges=(), model=sg.GraphModel.external())
        path = tmp_path / "g.txt"
        sg.write_edge_list(g, path)
        assert path.read_text() == "3 0\n"

    def test_round_trip_random_graphs(self, tmp_path):
        path = tmp_path / "g.txt"
        for seed in range(100):
            n = 1 + seed % 17
            g = sg.sample_gnp(n, 0.4, seed=seed)
            sg.write_edge_list(g, path)
            back = sg.read_edge_list(path)
            assert back.n == g.n and back.edges == g.edges

    @pytest.mark.parametrize(
        "content,line",
        [
            ("2 1\n0 x\n", 2),
            ("2 1\n0 2\n", 2),  # out of range
            ("3 2\n0 1\n0 1\n", 3),  # duplicate
            ("3 2\n1 0\n0 2\n", 2),  # unordered
            ("nope\n", 1),
            ("3 5\n0 1\n", 2),  # wrong edge count
        ],
    )
    def test_parse_errors_carry_line_numbers(self, tmp_path, content, line):
        path = tmp_path / "bad.txt"
        path.write_text(content)
        with pytest.raises(EdgeListParseError) as err:
            sg.read_edge_list(path)
        assert err.value.line == line


class TestEigenvalueCsv:
    def test_two_rows(self, tmp_path):
        dec = sg.eigendecompose(sg.SymMatrix(np.diag([2.0, 1.0])))
        path = tmp_path / "e.csv"
        sg.write_eigenvalues(dec, path)
        assert path.read_text() == "index,eigenvalue\n0,1\n1,2\n"

    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(12)
        values = np.sort(rng.standard_normal(37))
        path = tmp_path / "e.csv"
        sg.write_eigenvalues(sg.Esd(values), path)
        back = sgio.read_eigenvalues(path)
        assert np.array_equal(back, values)

    def test_row_count(self, tmp_path):
        g = sg.sample_gnp(23, 0.5, seed=0)
        path = tmp_path / "e.csv"
        sg.write_eigenvalues(sg.Esd(sg.eigenvalues_only(sg.adjacency_matrix(g))), path)
        assert len(path.read_text().splitlines()) == 24


class TestHistogram:
    def test_single_point_bin_assignment(self):
        hist = sg.emit_histogram(sg.Esd(np.array([0.0])), 2, -1.0, 1.0)
        assert hist.counts.tolist() == [0, 1]
        assert hist.overflow == 0

    def test_upper_edge_closed(self):
        hist = sg.emit_histogram(sg.Esd(np.array([1.0])), 2, -1.0, 1.0)
        assert hist.counts.tolist() == [0, 1]

    def test_uniform_quantiles_balanced(self):
        values = (np.arange(10_000) + 0.5) / 10_000
        hist = sg.emit_histogram(sg.Esd(values), 20, 0.0, 1.0)
        assert np.all(np.abs(hist.counts - 500) <= 25)

    def test_counts_plus_overflow_is_n(self):
        rng = np.random.default_rng(3)
        values = rng.standard_normal(500) * 2
        hist = sg.emit_histogram(sg.Esd(values), 7, -1.0, 1.0)
        assert hist.counts.sum() + hist.overflow == 500

    def test_density_integrates_to_one(self):
        rng = np.random.default_rng(4)
        hist = sg.emit_histogram(sg.Esd(rng.standard_normal(300)), 11, -2.0, 2.0)
        width = np.diff(hist.bin_edges)
        assert abs(np.sum(hist.density * width) - 1.0) < 1e-12

    def test_validation(self):
        esd = sg.Esd(np.array([0.0]))
        with pytest.raises(ValueError):
            sg.emit_histogram(esd, 0, 0.0, 1.0)
        with pytest.raises(ValueError):
            sg.emit_histogram(esd, 3, 1.0, 1.0)


class TestConfigFile:
    def test_parse(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("n=10\np = 0.5  # comment\n\n# full line comment\nmodel=gnp\n")
        assert sgio.parse_config_file(path) == {"n": "10", "p": "0.5", "model": "gnp"}

    def test_bad_line(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("just some words\n")
        with pytest.raises(ValueError):
            sgio.parse_config_file(path)


def run_cli(cmd: str) -> int:
    return main(shlex.split(cmd))


class TestCli:
    def test_sample_writes_edge_list(self, tmp_path):
        out = tmp_path / "g.txt"
        code = run_cli(f"sample --model gnp --n 10 --p 0.5 --seed 1 --out {out}")
        assert code == 0
        g = sg.read_edge_list(out)
        assert g.n == 10

    def test_sample_matches_library(self, tmp_path):
        out = tmp_path / "g.txt"
        run_cli(f"sample --model gnd --n 12 --d 3 --seed 9 --out {out}")
        assert sg.read_edge_list(out).edges == sg.sample_regular(12, 3, 9).edges

    def test_spectrum_round_trip(self, tmp_path):
        gpath = tmp_path / "g.txt"
        epath = tmp_path / "e.csv"
        run_cli(f"sample --model gnp --n 15 --p 0.4 --seed 2 --out {gpath}")
        code = run_cli(f"spectrum --in {gpath} --normalization centered-gnp --p 0.4 --out {epath}")
        assert code == 0
        values = sgio.read_eigenvalues(epath)
        expected = sg.eigenvalues_only(
            sg.normalize_centered_gnp(
                sg.adjacency_matrix(sg.sample_gnp(15, 0.4, 2)), 0.4
            )
        )
        assert np.array_equal(values, expected)

    def test_identities_interlacing_exit_zero(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(
            f"identities --which interlacing --trials 200 --size 12 "
            f"--master-seed 7 --out {out}"
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["pass"] is True
        assert report["aggregate"]["max_abs_residual"] == 0.0
        assert report["schema_version"] == 1
        assert report["config"]["master_seed"] == 7

    def test_unknown_flag_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli("sample --bogus 3")
        assert exc.value.code == 2

    def test_missing_required_exits_two(self):
        assert run_cli("sample --model gnp --n 5 --p 0.5") == 2  # no --out

    def test_failing_threshold_exits_one(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(
            f"convergence --model gnp --n 80 --p 0.4 --law semicircle --trials 1 "
            f"--master-seed 1 --ks-threshold 1e-9 --out {out}"
        )
        assert code == 1
        assert json.loads(out.read_text())["pass"] is False

    def test_no_timestamp_reports_byte_identical(self, tmp_path):
        out = tmp_path / "r.json"
        cmd = (
            f"moments --n 60 --p 0.4 --k-max 2 --trials 2 --master-seed 5 "
            f"--no-timestamp --out {out}"
        )
        run_cli(cmd)
        first = out.read_bytes()
        run_cli(cmd)
        assert out.read_bytes() == first

    def test_timestamp_present_by_default(self, tmp_path):
        out = tmp_path / "r.json"
        run_cli(
            f"moments --n 40 --p 0.4 --k-max 2 --trials 1 --master-seed 5 --out {out}"
        )
        assert "timestamp" in json.loads(out.read_text())

    def test_threads_do_not_change_report(self, tmp_path):
        out = tmp_path / "r.json"
        base = (
            f"concentration --model gnp --n 60 --p 0.4 --a -1 --b 1 --delta 0.3 "
            f"--trials 6 --master-seed 11 --no-timestamp --out {out} --threads "
        )
        run_cli(base + "1")
        ja = json.loads(out.read_text())
        run_cli(base + "8")
        jb = json.loads(out.read_text())
        ja["config"].pop("threads")
        jb["config"].pop("threads")
        assert ja == jb

    def test_config_file_supplies_values_cli_wins(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("n=60\np=0.4\nk-max=4\ntrials=2\nmaster-seed=5\nno-timestamp=true\n")
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(f"moments --config {cfg} --out {a}")
        report = json.loads(a.read_text())
        assert report["config"]["n"] == 60 and report["config"]["k_max"] == 4
        # command line overrides the file
        run_cli(f"moments --config {cfg} --k-max 2 --out {b}")
        assert json.loads(b.read_text())["config"]["k_max"] == 2

    def test_env_var_master_seed(self, tmp_path, monkeypatch):
        out = tmp_path / "r.json"
        monkeypatch.setenv("SPECGRAPH_SEED", "999")
        run_cli(f"moments --n 40 --p 0.4 --k-max 2 --trials 1 --out {out}")
        assert json.loads(out.read_text())["config"]["master_seed"] == 999
        # explicit flag wins over the environment
        run_cli(
            f"moments --n 40 --p 0.4 --k-max 2 --trials 1 --master-seed 3 --out {out}"
        )
        assert json.loads(out.read_text())["config"]["master_seed"] == 3

    def test_identities_minor_stieltjes_report(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(
            f"identities --which minor-stieltjes --trials 5 --size 15 "
            f"--master-seed 2 --no-timestamp --out {out}"
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["pass"] is True
        assert report["aggregate"]["max_abs_residual"] <= 1e-8
        assert len(report["trials"]) == 5

    def test_identities_eigvec_entry_report(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(
            f"identities --which eigvec-entry --trials 3 --size 10 "
            f"--master-seed 4 --out {out}"
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["pass"] is True
        assert report["aggregate"]["cases"] == 30

    def test_convergence_regular_degree_fifty(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(
            f"convergence --model gnd --n 1000 --d 50 --law semicircle --trials 1 "
            f"--master-seed 3 --ks-threshold 0.06 --out {out}"
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["pass"] is True
        assert report["aggregate"]["mean_ks"] <= 0.06

    def test_stieltjes_grid_check(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(f"stieltjes --re-points 25 --no-timestamp --out {out}")
        assert code == 0
        report = json.loads(out.read_text())
        assert report["aggregate"]["max_residual"] <= 1e-12
        assert report["aggregate"]["all_upper_half_plane"] is True

    def test_projection_smoke(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(
            f"projection --n 200 --p 0.3 --dim 20 --t 6 --trials 30 "
            f"--master-seed 4 --out {out}"
        )
        assert code == 0

    def test_isotropy_smoke(self, tmp_path):
        out = tmp_path / "r.json"
        code = run_cli(
            f"isotropy --n 60 --p 0.4 --trials 20 --reference 20 "
            f"--master-seed 3 --out {out}"
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert 0.0 <= report["aggregate"]["ks_statistic"] <= 1.0

    def test_report_structure(self, tmp_path):
        out = tmp_path / "r.json"
        run_cli(
            f"delocalize --n 120 --p 0.4 --kappa 0.5 --trials 2 "
            f"--master-seed 6 --no-timestamp --out {out}"
        )
        report = json.loads(out.read_text())
        for key in ("schema_version", "config", "trials", "aggregate", "pass"):
            assert key in report
        assert isinstance(report["trials"], list) and len(report["trials"]) == 2
