import json
import math

import pytest

import reference_values as ref
from lepbec import __version__
from lepbec.cli import main


def _run(tmp_path, *args):
    return main(list(args) + ["-o", str(tmp_path)])


def _read(tmp_path, stem):
    return json.loads((tmp_path / f"{stem}.json").read_text())


def test_critical_density_record(tmp_path):
    assert _run(tmp_path, "critical-density") == 0
    rec = _read(tmp_path, "critical-density")
    assert rec["value"] == pytest.approx(ref.RHO_C_BOSE_3D, rel=1e-10)
    assert rec["verdict"] == "finite"
    assert rec["version"] == __version__
    assert rec["config"]["command"] == "critical-density"


def test_divergent_critical_density_has_null_value(tmp_path):
    assert _run(tmp_path, "critical-density", "--set", "model.dispersion.d=2") in (0, 1)
    rec = _read(tmp_path, "critical-density")
    assert rec["verdict"] == "infinite" and rec["value"] is None


def test_csv_output(tmp_path):
    assert _run(tmp_path, "density", "--set", "model.stats.mu=-0.5", "--format", "csv") == 0
    lines = (tmp_path / "density.csv").read_text().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    assert meta[0] == f"# lepbec {__version__}"
    assert body[0] == "value,errorBound,verdict"
    assert float(body[1].split(",")[0]) == pytest.approx(ref.RHO_BOSE_MU_M05_3D, rel=1e-10)


def test_outputs_are_reproducible(tmp_path):
    args = ["condensate-map", "--set", "params.grid=41"]
    names = ("condensate-map.json", "condensate-map_map.svg")
    assert _run(tmp_path, *args) == 0
    first = [(tmp_path / n).read_bytes() for n in names]
    assert _run(tmp_path, *args) == 0
    assert first == [(tmp_path / n).read_bytes() for n in names]


def test_lep_check_with_condensate(tmp_path):
    code = _run(tmp_path, "lep-check", "--set", "numerics.trials=3", "--set",
                "params.singular=[{type: point, D: 1.0, k: [0, 0, 0]}, {type: gradient, D: 0.5}]")
    assert code == 0
    rec = _read(tmp_path, "lep-check")
    assert rec["verdict"] == "pass" and rec["value"] <= 1e-8


def test_misplaced_condensate_fails(tmp_path):
    code = _run(tmp_path, "lep-check", "--set", "numerics.trials=2", "--set",
                "params.singular=[{type: point, D: 1.0, k: [0.3, 0, 0]}]")
    assert code == 1


def test_config_error_writes_nothing(tmp_path):
    assert _run(tmp_path, "density", "--set", "model.stats.q=3") == 2
    assert _run(tmp_path, "density", "--set", "model.dispersion.s=-1") == 2
    assert not list(tmp_path.iterdir())


def test_supercritical_mu_exits_one(tmp_path):
    assert _run(tmp_path, "density", "--set", "model.stats.mu=0.5") == 1
    assert not list(tmp_path.iterdir())


def test_finite_dim_check(tmp_path):
    assert _run(tmp_path, "finite-dim-check", "--set", "params.models=4", "--format", "csv") == 0
    text = (tmp_path / "finite-dim-check.csv").read_text()
    assert "radon_nikodym" in text


def test_critical_mu_convention_b(tmp_path):
    assert _run(tmp_path, "critical-mu", "--set", "model.stats.convention=B", "--set",
                f"model.stats.q={math.exp(-1.0)!r}", "--set", "model.profile={variant: powerlog, alpha0: 0.0, alpha_inf: 2.0}") == 0
    assert _read(tmp_path, "critical-mu")["value"] > 0


def test_sweep_writes_figure(tmp_path):
    assert _run(tmp_path, "sweep", "--set", "params.Llist=[8, 16]") == 0
    assert (tmp_path / "sweep.json").exists()
    assert list(tmp_path.glob("sweep_*.svg"))


def test_no_figures_flag(tmp_path):
    assert _run(tmp_path, "sweep", "--set", "params.Llist=[8]", "--no-figures") == 0
    assert not list(tmp_path.glob("*.svg"))


def test_help_lists_columns(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "finite-dim-check: model, n, profile" in capsys.readouterr().out
