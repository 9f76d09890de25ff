import math

import numpy as np
import pytest

import optisph as osp
from optisph import fileio
from optisph.cli import main
from optisph.experiments import random_coefficients


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def grid8(tmp_path):
    path = tmp_path / "grid8.txt"
    assert run("grid", "-L", 8, "--ordering", "condmin", "-o", path) == 0
    return path


class TestGridCommand:
    def test_writes_cache_and_prints_summary(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        assert run("grid", "-L", 16, "--ordering", "condmin", "-o", out) == 0
        printed = capsys.readouterr().out
        assert "max_kappa" in printed and "samples=256" in printed
        grid = osp.load_grid(out)
        assert grid.band_limit == 16
        assert grid.ordering is osp.Ordering.CONDITION_MINIMIZED

    def test_single_ring_kappa_is_one(self, tmp_path, capsys):
        assert run("grid", "-L", 1, "-o", tmp_path / "g1.txt") == 0
        assert "max_kappa=1.0" in capsys.readouterr().out

    def test_sine_measure_worse_conditioned(self, tmp_path, capsys):
        assert run("grid", "-L", 12, "--ordering", "condmin", "-o", tmp_path / "u.txt") == 0
        k_uniform = float(capsys.readouterr().out.split("max_kappa=")[1])
        assert (
            run("grid", "-L", 12, "--measure", "sine", "--ordering", "condmin",
                "-o", tmp_path / "s.txt")
            == 0
        )
        k_sine = float(capsys.readouterr().out.split("max_kappa=")[1])
        assert k_sine > k_uniform


class TestTransformCommands:
    def test_inverse_of_constant_coefficients(self, tmp_path, grid8):
        c = osp.HarmonicCoefficients.zeros(8)
        c.set(0, 0, math.sqrt(4 * math.pi))
        cpath = tmp_path / "c.txt"
        fileio.write_coefficients(cpath, c)
        spath = tmp_path / "s.txt"
        assert run("inverse", "--coeffs", cpath, "--grid", grid8, "-o", spath) == 0
        signal = fileio.read_signal(spath)
        assert np.abs(signal.flatten() - 1.0).max() < 1e-12

    def test_forward_inverse_round_trip(self, tmp_path, grid8, rng):
        c = random_coefficients(8, rng)
        cpath = tmp_path / "c.txt"
        fileio.write_coefficients(cpath, c)
        spath = tmp_path / "s.txt"
        rpath = tmp_path / "r.txt"
        assert run("inverse", "--coeffs", cpath, "--grid", grid8, "-o", spath) == 0
        assert run("forward", "--signal", spath, "--grid", grid8, "-o", rpath) == 0
        back = fileio.read_coefficients(rpath)
        assert np.abs(back.values - c.values).max() <= 1e-8

    def test_oracle_flag_round_trip(self, tmp_path, grid8, rng):
        c = random_coefficients(8, rng)
        cpath = tmp_path / "c.txt"
        fileio.write_coefficients(cpath, c)
        spath = tmp_path / "s.txt"
        rpath = tmp_path / "r.txt"
        assert run("inverse", "--oracle", "--coeffs", cpath, "--grid", grid8, "-o", spath) == 0
        assert run("forward", "--oracle", "--signal", spath, "--grid", grid8, "-o", rpath) == 0
        back = fileio.read_coefficients(rpath)
        assert np.abs(back.values - c.values).max() <= 1e-8

    def test_band_limit_mismatch_exits_2(self, tmp_path, grid8, rng, capsys):
        c = random_coefficients(4, rng)
        cpath = tmp_path / "c.txt"
        fileio.write_coefficients(cpath, c)
        code = run("inverse", "--coeffs", cpath, "--grid", grid8, "-o", tmp_path / "s.txt")
        assert code == 2
        message = capsys.readouterr().err
        assert "4" in message and "8" in message

    def test_malformed_signal_exits_2(self, tmp_path, grid8):
        bad = tmp_path / "bad.txt"
        bad.write_text("garbage\n")
        assert run("forward", "--signal", bad, "--grid", grid8, "-o", tmp_path / "o.txt") == 2


class TestExperimentCommands:
    def test_exp1_threshold_and_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ("exp1", "-L", "2,4", "--trials", 3, "--seed", 5, "--ordering", "condmin")
        assert run(*args, "-o", out1) == 0
        assert run(*args, "-o", out2) == 0
        assert out1.read_bytes() == out2.read_bytes()
        lines = out1.read_text().splitlines()
        assert lines[0] == "# optisph exp1 seed=5"
        assert lines[1] == "L,trials,e_max,e_mean"
        e_max_L2 = float(lines[2].split(",")[2])
        assert e_max_L2 <= 1e-13

    def test_exp2_spatial_identity(self, tmp_path):
        out = tmp_path / "e2.csv"
        assert run("exp2", "-L", "8", "--trials", 2, "--seed", 1,
                   "--ordering", "condmin", "-o", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "# optisph exp2 seed=1"
        assert float(lines[2].split(",")[2]) <= 1e-10

    def test_errsurface_row_count(self, tmp_path):
        out = tmp_path / "es.csv"
        assert run("errsurface", "-L", 8, "--trials", 2, "--seed", 3,
                   "--ordering", "condmin", "-o", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "# optisph errsurface seed=3"
        assert lines[1] == "ell,m,e"
        assert len(lines) - 2 == 64

    def test_cond_summary_rows(self, tmp_path, capsys):
        out = tmp_path / "cond.csv"
        assert run("cond", "-L", "4,8", "-o", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "# optisph cond seed=0"
        assert lines[1] == "L,m,kappa"
        data = [ln.split(",") for ln in lines[2:]]
        assert sum(1 for row in data if row[1] == "max") == 2
        assert len(data) == 4 + 8 + 2

    def test_bench_columns(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert run("bench", "-L", "4,8", "--trials", 1, "-o", out) == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "L,trials,tau_i,tau_f,tau_f1"
        for ln in lines[2:]:
            L, trials, ti, tf, tf1 = ln.split(",")
            assert float(tf1) <= float(tf)

    def test_bench_mean_flag(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert run("bench", "-L", "4", "--trials", 2, "--mean", "-o", out) == 0
        assert len(out.read_text().splitlines()) == 3

    def test_conditioning_failure_reported_per_band_limit(self, tmp_path):
        # the sine-measure grid at L=64 is numerically singular: its row
        # carries the error while the rest of the sweep still completes
        out = tmp_path / "e1.csv"
        assert run("exp1", "-L", "64,2", "--trials", 1, "--seed", 0,
                   "--measure", "sine", "--ordering", "interleaved", "-o", out) == 0
        lines = out.read_text().splitlines()
        assert lines[2].startswith("64,1,error:")
        ok = lines[3].split(",")
        assert ok[0] == "2" and float(ok[2]) < 1e-12


class TestNumericFailureExitCode:
    def test_forward_on_singular_grid_exits_1(self, tmp_path, rng, capsys):
        gpath = tmp_path / "sine64.txt"
        assert run("grid", "-L", 64, "--measure", "sine",
                   "--ordering", "interleaved", "-o", gpath) == 0
        capsys.readouterr()
        grid = osp.load_grid(gpath)
        samples = osp.SpatialSamples.from_flat(
            64, rng.uniform(-1, 1, 4096) + 1j * rng.uniform(-1, 1, 4096)
        )
        spath = tmp_path / "s.txt"
        fileio.write_signal(spath, samples)
        code = run("forward", "--signal", spath, "--grid", gpath, "-o", tmp_path / "c.txt")
        assert code == 1
        assert "singular" in capsys.readouterr().err
