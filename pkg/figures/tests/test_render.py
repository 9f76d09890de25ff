from pathlib import Path

import pytest

from optisph_figures import FigureError, FigureSpec, read_report, render
from optisph_figures.cli import main

DATA = Path(__file__).parent / "data"

GOLDEN = {
    "error-sweep": DATA / "exp1.csv",
    "cond-curve": DATA / "cond.csv",
    "cond-max": DATA / "cond.csv",
    "err-surface": DATA / "errsurface.csv",
    "timing": DATA / "bench.csv",
}


class TestRenderKinds:
    @pytest.mark.parametrize("kind", sorted(GOLDEN))
    def test_golden_csv_renders(self, kind, tmp_path):
        out = tmp_path / f"{kind}.png"
        fig = render(FigureSpec(source=GOLDEN[kind], kind=kind, out=out))
        assert out.exists() and out.stat().st_size > 1000
        assert fig.axes  # something was drawn

    def test_exp2_also_accepted_by_error_sweep(self, tmp_path):
        out = tmp_path / "exp2.png"
        render(FigureSpec(source=DATA / "exp2.csv", kind="error-sweep", out=out))
        assert out.exists()

    def test_timing_plot_embeds_guide_lines(self, tmp_path):
        out = tmp_path / "t.png"
        fig = render(FigureSpec(source=DATA / "bench.csv", kind="timing", out=out))
        labels = [line.get_label() for line in fig.axes[0].get_lines()]
        assert "O(L^3)" in labels
        assert "O(L^4)" in labels
        assert len(labels) == 5  # three measured series plus two guides

    def test_rendering_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(FigureSpec(source=DATA / "exp1.csv", kind="error-sweep", out=a))
        render(FigureSpec(source=DATA / "exp1.csv", kind="error-sweep", out=b))
        assert a.read_bytes() == b.read_bytes()


class TestValidation:
    def test_unknown_kind(self, tmp_path):
        with pytest.raises(FigureError, match="unknown figure kind"):
            FigureSpec(source=DATA / "exp1.csv", kind="pie", out=tmp_path / "x.png")

    def test_command_kind_mismatch(self, tmp_path):
        with pytest.raises(FigureError, match="cannot be drawn"):
            render(FigureSpec(source=DATA / "bench.csv", kind="error-sweep",
                              out=tmp_path / "x.png"))

    def test_missing_provenance_line(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("L,trials,e_max,e_mean\n4,3,1e-15,1e-16\n")
        with pytest.raises(FigureError, match="provenance"):
            read_report(bad, "error-sweep")

    def test_wrong_columns(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("# optisph exp1 seed=0\nL,e\n4,1e-15\n")
        with pytest.raises(FigureError, match="expected columns"):
            read_report(bad, "error-sweep")

    def test_empty_report(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("# optisph exp1 seed=0\nL,trials,e_max,e_mean\n")
        with pytest.raises(FigureError, match="no data"):
            render(FigureSpec(source=bad, kind="error-sweep", out=tmp_path / "x.png"))

    def test_all_rows_failed(self, tmp_path):
        bad = tmp_path / "failed.csv"
        bad.write_text(
            "# optisph exp1 seed=0\nL,trials,e_max,e_mean\n4,3,error:singular,\n"
        )
        with pytest.raises(FigureError, match="no data"):
            render(FigureSpec(source=bad, kind="error-sweep", out=tmp_path / "x.png"))


class TestCli:
    def test_success_exit_code(self, tmp_path):
        out = tmp_path / "fig.png"
        code = main(["--kind", "timing", "--in", str(DATA / "bench.csv"),
                     "--out", str(out)])
        assert code == 0
        assert out.exists()

    def test_mismatch_exit_code(self, tmp_path, capsys):
        code = main(["--kind", "timing", "--in", str(DATA / "exp1.csv"),
                     "--out", str(tmp_path / "fig.png")])
        assert code == 2
        assert "cannot be drawn" in capsys.readouterr().err
