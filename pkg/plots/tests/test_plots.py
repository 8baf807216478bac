import time

import pytest

from csplot.cli import main as plot_main
from csplot.render import (MissingColumnError, NoDataError, PlotSpec, render,
                           wilson_interval)

# the sweep CSV schema this component consumes (frozen column order)
HEADER = ("kind,k,n,m,r,trials,master_seed,sat_count,sat_rate,solver,"
          "success_count,success_rate,budget_exceeded_count,wall_ms")

ROWS = [
    "ksat,3,20,20,1.0,50,7,50,1.0,oracle,50,1.0,0,0",
    "ksat,3,20,60,3.0,50,7,46,0.92,oracle,46,0.92,0,0",
    "ksat,3,20,100,5.0,50,7,11,0.22,oracle,11,0.22,0,0",
    "ksat,3,40,40,1.0,50,7,50,1.0,oracle,50,1.0,0,0",
    "ksat,3,40,120,3.0,50,7,48,0.96,oracle,48,0.96,0,0",
    "ksat,3,40,200,5.0,50,7,4,0.08,oracle,4,0.08,0,0",
]

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture
def sweep_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    path.write_text(HEADER + "\n" + "\n".join(ROWS) + "\n")
    return path


def test_two_curve_figure_renders_fast(sweep_csv, tmp_path):
    out = tmp_path / "curve.png"
    t0 = time.perf_counter()
    rc = plot_main(["--in", str(sweep_csv), "--x", "r", "--y", "sat_rate",
                    "--group", "n", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    assert rc == 0
    assert elapsed < 10.0
    data = out.read_bytes()
    assert data.startswith(PNG_MAGIC) and len(data) > 1000


def test_missing_column_is_named(sweep_csv, tmp_path, capsys):
    rc = plot_main(["--in", str(sweep_csv), "--x", "r", "--y", "no_such_rate",
                    "--out", str(tmp_path / "x.png")])
    assert rc != 0
    assert "no_such_rate" in capsys.readouterr().err
    with pytest.raises(MissingColumnError):
        render(PlotSpec((str(sweep_csv),), "r", ("definitely_absent",),
                        out=str(tmp_path / "y.png")))


def test_empty_series_is_an_error(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(HEADER + "\n")
    rc = plot_main(["--in", str(path), "--x", "r", "--y", "sat_rate",
                    "--out", str(tmp_path / "z.png")])
    assert rc != 0
    with pytest.raises(NoDataError):
        render(PlotSpec((str(path),), "r", ("sat_rate",), out=str(tmp_path / "w.png")))


def test_blank_rate_cells_are_skipped(tmp_path):
    path = tmp_path / "solver.csv"
    rows = ["ksat,3,20,20,1.0,50,7,,,unit-clause,49,0.98,0,0",
            "ksat,3,20,60,3.0,50,7,,,unit-clause,21,0.42,0,0"]
    path.write_text(HEADER + "\n" + "\n".join(rows) + "\n")
    out = tmp_path / "s.png"
    rc = plot_main(["--in", str(path), "--x", "r", "--y", "success_rate",
                    "--out", str(out)])
    assert rc == 0 and out.read_bytes().startswith(PNG_MAGIC)
    # requesting the all-blank column leaves nothing to draw
    rc = plot_main(["--in", str(path), "--x", "r", "--y", "sat_rate",
                    "--out", str(tmp_path / "t.png")])
    assert rc != 0


def test_deterministic_output(sweep_csv, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    for out in (a, b):
        rc = plot_main(["--in", str(sweep_csv), "--x", "r", "--y", "sat_rate",
                        "--y", "success_rate", "--group", "n",
                        "--out", str(out), "--title", "sweep"])
        assert rc == 0
    assert a.read_bytes() == b.read_bytes()


def test_input_never_mutated(sweep_csv, tmp_path):
    before = sweep_csv.read_bytes()
    plot_main(["--in", str(sweep_csv), "--x", "r", "--y", "sat_rate",
               "--out", str(tmp_path / "m.png")])
    assert sweep_csv.read_bytes() == before


def test_wilson_interval_sane():
    lo, hi = wilson_interval(46, 50)
    assert 0.0 <= lo < 46 / 50 < hi <= 1.0
