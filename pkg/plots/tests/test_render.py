from pathlib import Path

import pytest

from isingplots.cli import main
from isingplots.render import PlotJob, PlotKind, render

FIXTURES = Path(__file__).parent / "fixtures"

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def job(kind, out, *inputs, **kw):
    return PlotJob(inputs=tuple(str(i) for i in inputs), kind=kind, output=str(out), **kw)


class TestRender:
    def test_heatmap(self, tmp_path):
        out = tmp_path / "rbim.png"
        render(job(PlotKind.HEATMAP, out, FIXTURES / "rbim_scan.csv", title="(p, T) scan"))
        assert out.read_bytes()[:8] == PNG_MAGIC

    def test_phase_diagram_with_nishimori_overlay(self, tmp_path):
        out = tmp_path / "phase.png"
        render(job(PlotKind.PHASE_DIAGRAM, out, FIXTURES / "coherence_scan.csv"))
        assert out.read_bytes()[:8] == PNG_MAGIC

    def test_binder_curves(self, tmp_path):
        out = tmp_path / "binder.svg"
        render(job(PlotKind.BINDER, out, FIXTURES / "binder_scan.csv"))
        assert b"<svg" in out.read_bytes()[:300]

    def test_threshold_curves_multi_size(self, tmp_path):
        out = tmp_path / "threshold.png"
        render(
            job(
                PlotKind.THRESHOLD, out,
                FIXTURES / "threshold_L2.csv", FIXTURES / "threshold_L3.csv",
            )
        )
        assert out.read_bytes()[:8] == PNG_MAGIC

    def test_rerender_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(job(PlotKind.HEATMAP, a, FIXTURES / "rbim_scan.csv"))
        render(job(PlotKind.HEATMAP, b, FIXTURES / "rbim_scan.csv"))
        assert a.read_bytes() == b.read_bytes()

    def test_empty_inputs_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            PlotJob(inputs=(), kind=PlotKind.HEATMAP, output=str(tmp_path / "x.png"))


class TestCli:
    def test_renders_and_prints_path(self, tmp_path, capsys):
        out = tmp_path / "fig.png"
        rc = main(["heatmap", str(FIXTURES / "rbim_scan.csv"), "-o", str(out)])
        assert rc == 0
        assert str(out) in capsys.readouterr().out
        assert out.exists()

    def test_schema_violation_exit_code_and_column(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("p,q_or_T,mean,stderr,n_disorder,sweeps\n0.1,0.2,0.5,0.01,2,100\n")
        rc = main(["heatmap", str(bad), "-o", str(tmp_path / "fig.png")])
        assert rc == 1
        assert "seed" in capsys.readouterr().err

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["not-a-kind", "x.csv", "-o", "y.png"])
        assert exc.value.code == 2
