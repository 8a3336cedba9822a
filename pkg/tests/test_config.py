import pytest

from lepbec import config
from lepbec.errors import ConfigError


def test_defaults_for_every_command():
    for cmd in config.COMMANDS:
        if cmd == "fermi-mu":
            continue
        cfg = config.load(command=cmd)
        assert cfg["command"] == cmd
        assert cfg["output"]["stem"] == cmd


def test_override_parsing():
    parts, value = config.parse_override("model.stats.q=0.5")
    assert parts == ["model", "stats", "q"] and value == 0.5
    assert config.parse_override("params.Llist=[8, 16]")[1] == [8, 16]
    with pytest.raises(ConfigError):
        config.parse_override("no_equals_sign")


def test_file_with_overrides(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("command: density\nmodel:\n  stats: {q: 0.5, mu: -1.0}\n")
    cfg = config.load(str(path), ["model.stats.mu=-2.0"])
    assert cfg["model"]["stats"] == {"q": 0.5, "mu": -2.0, "convention": "A"}
    assert cfg["model"]["dispersion"]["s"] == 2.0


def test_positional_command_wins(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("command: density\n")
    assert config.load(str(path), command="critical-mu")["command"] == "critical-mu"


def test_env_output_dir(monkeypatch, tmp_path):
    monkeypatch.setenv(config.OUTPUT_ENV, str(tmp_path))
    assert config.load(command="density")["output"]["dir"] == str(tmp_path)


@pytest.mark.parametrize("override", [
    "model.stats.q=2",
    "model.stats.convention=C",
    "model.profile.variant=strange",
    "model.profile.beta1=1",
    "model.dispersion.d=0",
    "numerics.bogus=1",
    "numerics.resolution.grading=1.5",
    "output.format=xml",
    "output.stem=a/b",
    "params.unknown=1",
    "model.stats.mu=true",
])
def test_invalid_values(override):
    with pytest.raises(ConfigError):
        config.load(overrides=[override], command="density")


def test_malformed_and_missing_files(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("command: [unclosed\n")
    with pytest.raises(ConfigError):
        config.load(str(bad))
    with pytest.raises(ConfigError):
        config.load(str(tmp_path / "missing.yaml"))
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        config.load(str(listing))


def test_command_params():
    with pytest.raises(ConfigError):
        config.load(command="fermi-mu")
    assert config.load(overrides=["params.rho=3"], command="fermi-mu")["params"]["rho"] == 3.0
    with pytest.raises(ConfigError):
        config.load(overrides=["params.singular=[{type: point, D: 1, k: [0, 0]}]"], command="lep-check")
    with pytest.raises(ConfigError):
        config.load(overrides=["params.singular=[{type: point, D: -1, k: [0, 0, 0]}]"], command="lep-check")
    cfg = config.load(overrides=["params.singular=[{type: sphere, D: 1, radius: 1}]"], command="lep-check")
    assert cfg["params"]["singular"][0]["radius"] == 1.0
    with pytest.raises(ConfigError):
        config.load(overrides=["params.n_max=20"], command="finite-dim-check")


def test_partial_dispersion_override_keeps_kind():
    cfg = config.load(overrides=["model.dispersion.d=2", "model.profile.beta0=0.5"], command="density")
    assert cfg["model"]["dispersion"] == {"kind": "power", "s": 2.0, "d": 2}
    assert cfg["model"]["profile"] == {"variant": "constant", "beta0": 0.5}


def test_new_variant_replaces_section():
    cfg = config.load(overrides=["model.profile={variant: zeroat, x0: 1.0, a: 0.5, alpha_inf: 2.0}"], command="density")
    assert "beta0" not in cfg["model"]["profile"]
