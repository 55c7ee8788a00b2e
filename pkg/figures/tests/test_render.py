import shutil
import subprocess

import numpy as np
import pytest

from posmogram_figures import FigureSpec, SchemaError, render
from posmogram_figures.cli import main
from posmogram_figures.schema import read_density_file, read_overlay_file


def synthetic_overlay_csv(path, n=401):
    lam = np.linspace(-6.0, 6.0, n)
    solid = np.exp(-lam ** 2)
    dashed = 1.02 * np.exp(-1.05 * lam ** 2)
    lines = ["# posmogram 0.1.0; dimensionless units (hbar = 1, r = 1)",
             "# l=0 m=0 sho_level=0 scale=1.0",
             "lambda,density,sho_density"]
    for k in range(n):
        lines.append(f"{lam[k]:.17g},{solid[k]:.17g},{dashed[k]:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def synthetic_density_csv(path, modes=((5, 0), (5, 1)), n=501):
    lam = np.linspace(-8.0, 8.0, n)
    lines = ["# posmogram 0.1.0; dimensionless units (hbar = 1, r = 1)",
             "lambda,re_I,im_I,density"]
    for (l, m) in modes:
        parity = "+" if (l + m) % 2 == 0 else "-"
        lines.append(f"# l={l} m={m} parity={parity}")
        amp = np.exp(-0.5 * lam ** 2) * np.cos((l - m) * lam)
        for k in range(n):
            lines.append(f"{lam[k]:.17g},{amp[k]:.17g},0,{amp[k] ** 2:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_overlay_roundtrip_parsing(tmp_path):
    path = synthetic_overlay_csv(tmp_path / "o.csv")
    overlay = read_overlay_file(path)
    assert overlay.lambdas.size == 401
    assert overlay.report["l"] == "0"
    assert overlay.density.max() == pytest.approx(1.0)


def test_density_roundtrip_parsing(tmp_path):
    path = synthetic_density_csv(tmp_path / "d.csv")
    blocks = read_density_file(path)
    assert [(b.l, b.m, b.parity) for b in blocks] == [(5, 0, "-"), (5, 1, "+")]
    assert blocks[0].data.shape == (501, 4)


def test_fig1_renders_from_synthetic_overlay(tmp_path):
    data = synthetic_overlay_csv(tmp_path / "o.csv")
    out = tmp_path / "fig1.png"
    assert render(FigureSpec("fig1", (str(data),), str(out))) == str(out)
    assert out.stat().st_size > 5000


def test_fig2_renders_six_curves(tmp_path):
    data = synthetic_density_csv(tmp_path / "d.csv", modes=[(5, m) for m in range(6)])
    out = tmp_path / "fig2.svg"
    render(FigureSpec("fig2", (str(data),), str(out)))
    svg = out.read_text()
    assert svg.count("(5,") >= 6  # one legend label per mode


def test_fig3_renders_via_cli(tmp_path):
    data = synthetic_overlay_csv(tmp_path / "o.csv")
    out = tmp_path / "fig3.png"
    assert main(["fig3", "--in", str(data), "--out", str(out)]) == 0
    assert out.exists()


def test_missing_column_fails_cleanly(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("lambda,density\n0,1\n", encoding="utf-8")
    assert main(["fig1", "--in", str(bad), "--out", str(tmp_path / "x.png")]) == 1


def test_malformed_marker_fails_cleanly(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("lambda,re_I,im_I,density\n# l=5 parity=+\n0,1,0,1\n", encoding="utf-8")
    assert main(["fig2", "--in", str(bad), "--out", str(tmp_path / "x.png")]) == 1


def test_bad_figure_id_rejected(tmp_path):
    with pytest.raises(SchemaError):
        FigureSpec("fig9", ("x.csv",), "y.png")
    with pytest.raises(SchemaError):
        FigureSpec("fig1", ("x.csv",), "y.bmp")


# ---------------------------------------------------------------------------
# integration against the real computation CLI, when it is installed
# ---------------------------------------------------------------------------

needs_cli = pytest.mark.skipif(shutil.which("posmogram") is None,
                               reason="posmogram CLI not installed")


@pytest.fixture(scope="module")
def real_overlay(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "overlay.csv"
    subprocess.run(["posmogram", "compare-sho", "--l", "0", "--m", "0", "--n", "0",
                    "--lo", "-12", "--hi", "12", "--points", "1201",
                    "--out", str(path)], check=True)
    return path


@needs_cli
def test_fig1_from_real_cli_output(tmp_path, real_overlay):
    out = tmp_path / "fig1.png"
    assert main(["fig1", "--in", str(real_overlay), "--out", str(out)]) == 0
    assert out.stat().st_size > 5000


@needs_cli
@pytest.mark.xfail(strict=True,
                   reason="variance-matched scaling leaves an 18.5%-of-peak gap between the "
                          "(0,0) posmom density and the oscillator ground density; the 5% "
                          "near-coincidence bound is not attainable (same finding as the "
                          "primary suite)")
def test_fig1_curves_near_coincident(real_overlay):
    overlay = read_overlay_file(real_overlay)
    gap = float(np.max(np.abs(overlay.density - overlay.sho_density)))
    assert gap < 0.05 * float(overlay.density.max())


@needs_cli
def test_fig2_from_real_cli_output(tmp_path):
    data = tmp_path / "l5.csv"
    subprocess.run(["posmogram", "density", "--l", "5", "--m", "0..5",
                    "--lo", "-10", "--hi", "10", "--n", "1001",
                    "--out", str(data)], check=True)
    out = tmp_path / "fig2.png"
    assert main(["fig2", "--in", str(data), "--out", str(out)]) == 0
    assert out.stat().st_size > 5000


@needs_cli
def test_fig3_from_real_cli_output(tmp_path):
    data = tmp_path / "overlay20.csv"
    subprocess.run(["posmogram", "compare-sho", "--l", "20", "--m", "0", "--n", "10",
                    "--lo", "-18", "--hi", "18", "--points", "1801",
                    "--out", str(data)], check=True)
    out = tmp_path / "fig3.png"
    assert main(["fig3", "--in", str(data), "--out", str(out)]) == 0
    assert out.stat().st_size > 5000
