"""Run configuration: strict YAML files plus ``--set`` overrides.

A configuration has five top-level sections::

    command: lep-check
    model:
      dispersion: {kind: power, s: 2.0, d: 3}
      profile: {variant: constant, beta0: 1.0}
      stats: {q: 1.0, mu: critical, convention: A}
    numerics: {rtol: 1.0e-12, tol: 1.0e-8, seed: 0, trials: 20}
    output: {dir: ., stem: null, format: json, figures: true}
    params: {}            # command specific, see COMMAND_PARAMS

Unknown keys anywhere are rejected.  ``mu: critical`` selects the critical
chemical potential of the chosen statistics.
"""

from __future__ import annotations

import copy
import math
import os

import yaml

from .errors import ConfigError

COMMANDS = ("critical-density", "density", "critical-mu", "fermi-mu", "sweep", "lep-check",
            "density-profile", "condensate-map", "finite-dim-check", "admissibility")

OUTPUT_ENV = "LEPBEC_OUTPUT_DIR"

DEFAULTS = {
    "command": None,
    "model": {
        "dispersion": {"kind": "power", "s": 2.0, "d": 3},
        "profile": {"variant": "constant", "beta0": 1.0},
        "stats": {"q": 1.0, "mu": "critical", "convention": "A"},
    },
    "numerics": {
        "rtol": 1e-12,
        "tol": 1e-8,
        "seed": 0,
        "trials": 20,
        "resolution": {"radial_panels": 8, "order": 16, "polar_panels": 4, "azimuth": 48,
                       "graded_order": 12, "grading": 0.25},
    },
    "output": {"dir": None, "stem": None, "format": "json", "figures": True},
    "params": {},
}

DISPERSION_KEYS = {"power": {"kind", "s", "d"}, "relativistic": {"kind", "m", "c", "d"}}
PROFILE_KEYS = {"constant": {"variant", "beta0"}, "powerlog": {"variant", "alpha0", "alpha_inf"},
                "zeroat": {"variant", "x0", "a", "alpha_inf"}}
SINGULAR_KEYS = {"point": {"type", "D", "k"}, "sphere": {"type", "D", "radius"},
                 "atoms": {"type", "atoms"}, "gradient": {"type", "D", "axes"}}

# allowed params per command with their defaults
COMMAND_PARAMS = {
    "critical-density": {},
    "density": {},
    "critical-mu": {},
    "fermi-mu": {"rho": None},
    "sweep": {"rho_factor": 2.0, "Llist": [32.0, 64.0, 128.0, 256.0, 512.0]},
    "lep-check": {"singular": [], "diagonal": True, "scale": 1.0},
    "density-profile": {"singular": [], "points": [[0.0, 0.0, 0.0]]},
    "condensate-map": {"singular": [{"type": "gradient", "D": 1.0, "axes": [0, 1]}], "eps": 0.2,
                       "extent": 1.0, "grid": 101},
    "finite-dim-check": {"models": 20, "n_max": 8, "eigenvalues": None, "observables": 10,
                         "times": [0.0, 0.3, 1.7, -2.5, 4.0], "tol": 1e-12,
                         "profiles": [{"variant": "constant", "beta0": 1.0},
                                      {"variant": "powerlog", "alpha0": 0.5, "alpha_inf": 2.0},
                                      {"variant": "powerlog", "alpha0": -0.5, "alpha_inf": 3.0},
                                      {"variant": "zeroat", "x0": 1.0, "a": 0.5, "alpha_inf": 2.0}]},
    "admissibility": {},
}


_VARIANT_KEY = {"dispersion": "kind", "profile": "variant"}


def _merge(base: dict, over: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown key {where!r}")
        if key in _VARIANT_KEY and isinstance(val, dict) and isinstance(base[key], dict):
            # a partial mapping of the same variant updates single entries;
            # naming another variant replaces the whole section
            tag = _VARIANT_KEY[key]
            same = tag not in val or val[tag] == base[key].get(tag)
            out[key] = {**base[key], **copy.deepcopy(val)} if same else copy.deepcopy(val)
        elif isinstance(base[key], dict) and base[key] and key not in _VARIANT_KEY:
            if not isinstance(val, dict):
                raise ConfigError(f"{where!r} must be a mapping")
            out[key] = _merge(base[key], val, where + ".")
        else:
            out[key] = copy.deepcopy(val)
    return out


def parse_override(text: str):
    """Split ``a.b.c=value`` into a key path and a YAML-parsed value."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    parts = [p for p in key.strip().split(".") if p]
    if not parts:
        raise ConfigError(f"override {text!r} has an empty key")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse value in {text!r}: {exc}") from None
    return parts, value


def _apply_override(tree: dict, parts, value) -> None:
    node = tree
    for p in parts[:-1]:
        if not isinstance(node.get(p), dict):
            node[p] = {}
        node = node[p]
    node[parts[-1]] = value


def load(path: str | None = None, overrides=(), command: str | None = None) -> dict:
    """Read, merge and validate a configuration.

    Flag overrides win over the file and a positional ``command`` wins over
    both.

    Raises
    ------
    ConfigError
        On unreadable files, unknown keys or invalid values.
    """
    raw: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed YAML: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("the config file must contain a mapping")
    raw = copy.deepcopy(raw)
    for text in overrides:
        parts, value = parse_override(text)
        _apply_override(raw, parts, value)
    if command is not None:
        raw["command"] = command
    return validate(raw)


def _num(value, where, positive=False, nonneg=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    if positive and not value > 0:
        raise ConfigError(f"{where} must be positive, got {value!r}")
    if nonneg and value < 0:
        raise ConfigError(f"{where} must be non-negative, got {value!r}")
    return int(value) if integer else float(value)


def _keys(section: dict, allowed: set, where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be a mapping")
    extra = sorted(set(section) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) {extra} in {where}")


def _validate_singular(parts, d: int, where: str) -> list:
    if not isinstance(parts, list):
        raise ConfigError(f"{where} must be a list")
    out = []
    for i, part in enumerate(parts):
        w = f"{where}[{i}]"
        if not isinstance(part, dict) or part.get("type") not in SINGULAR_KEYS:
            raise ConfigError(f"{w} needs a type among {sorted(SINGULAR_KEYS)}")
        _keys(part, SINGULAR_KEYS[part["type"]], w)
        p = dict(part)
        if "D" in p:
            p["D"] = _num(p["D"], f"{w}.D", nonneg=True)
        if p["type"] == "point":
            p["k"] = _vector(p.get("k"), d, f"{w}.k")
        elif p["type"] == "sphere":
            p["radius"] = _num(p.get("radius"), f"{w}.radius", nonneg=True)
        elif p["type"] == "atoms":
            atoms = p.get("atoms")
            if not isinstance(atoms, list) or not atoms:
                raise ConfigError(f"{w}.atoms must be a non-empty list")
            p["atoms"] = [{"w": _num(a.get("w"), f"{w}.atoms.w", nonneg=True), "p": _vector(a.get("p"), d, f"{w}.atoms.p")}
                          if isinstance(a, dict) and set(a) == {"w", "p"}
                          else _fail(f"{w}.atoms entries need exactly the keys w and p") for a in atoms]
        elif p["type"] == "gradient":
            axes = p.get("axes")
            if axes is not None:
                if not isinstance(axes, list) or not all(isinstance(j, int) and 0 <= j < d for j in axes):
                    raise ConfigError(f"{w}.axes must list axis indices below d={d}")
        if "D" not in p:
            if p["type"] != "atoms":
                raise ConfigError(f"{w}.D is required")
        out.append(p)
    return out


def _fail(msg):
    raise ConfigError(msg)


def _vector(v, d, where):
    if not isinstance(v, list) or len(v) != d:
        raise ConfigError(f"{where} must be a list of {d} numbers")
    return [_num(x, where) for x in v]


def validate(raw: dict) -> dict:
    """Merge ``raw`` over the defaults and check every value."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping")
    cfg = _merge(DEFAULTS, raw)
    cmd = cfg["command"]
    if cmd not in COMMANDS:
        raise ConfigError(f"command must be one of {list(COMMANDS)}, got {cmd!r}")

    m = cfg["model"]
    disp = m["dispersion"]
    kind = disp.get("kind") if isinstance(disp, dict) else None
    if kind not in DISPERSION_KEYS:
        raise ConfigError(f"model.dispersion.kind must be one of {sorted(DISPERSION_KEYS)}")
    _keys(disp, DISPERSION_KEYS[kind], "model.dispersion")
    disp["d"] = _num(disp.get("d", 3), "model.dispersion.d", positive=True, integer=True)
    if kind == "power":
        disp["s"] = _num(disp.get("s", 2.0), "model.dispersion.s", positive=True)
    else:
        disp["m"] = _num(disp.get("m", 0.0), "model.dispersion.m", nonneg=True)
        disp["c"] = _num(disp.get("c", 1.0), "model.dispersion.c", positive=True)
    d = disp["d"]
    m["profile"] = _validate_profile(m["profile"], "model.profile")
    st = m["stats"]
    st["q"] = _num(st["q"], "model.stats.q")
    if not -1.0 <= st["q"] <= 1.0:
        raise ConfigError("model.stats.q must lie in [-1, 1]")
    if st["mu"] != "critical":
        st["mu"] = _num(st["mu"], "model.stats.mu")
    if st["convention"] not in ("A", "B"):
        raise ConfigError("model.stats.convention must be A or B")

    nm = cfg["numerics"]
    for key in ("rtol", "tol"):
        nm[key] = _num(nm[key], f"numerics.{key}", positive=True)
    nm["seed"] = _num(nm["seed"], "numerics.seed", nonneg=True, integer=True)
    nm["trials"] = _num(nm["trials"], "numerics.trials", positive=True, integer=True)
    res = nm["resolution"]
    for key in ("radial_panels", "order", "polar_panels", "azimuth", "graded_order"):
        res[key] = _num(res[key], f"numerics.resolution.{key}", positive=True, integer=True)
    res["grading"] = _num(res["grading"], "numerics.resolution.grading", positive=True)
    if not res["grading"] < 1:
        raise ConfigError("numerics.resolution.grading must lie in (0, 1)")

    out = cfg["output"]
    if out["format"] not in ("json", "csv"):
        raise ConfigError("output.format must be json or csv")
    if not isinstance(out["figures"], bool):
        raise ConfigError("output.figures must be true or false")
    if out["dir"] is None:
        out["dir"] = os.environ.get(OUTPUT_ENV, ".")
    out["dir"] = str(out["dir"])
    if out["stem"] is None:
        out["stem"] = cmd
    if not isinstance(out["stem"], str) or not out["stem"] or os.sep in out["stem"]:
        raise ConfigError("output.stem must be a plain file name")

    cfg["params"] = _validate_params(cmd, cfg["params"], d)
    return cfg


def _validate_profile(prof, where):
    variant = prof.get("variant") if isinstance(prof, dict) else None
    if variant not in PROFILE_KEYS:
        raise ConfigError(f"{where}.variant must be one of {sorted(PROFILE_KEYS)}")
    _keys(prof, PROFILE_KEYS[variant], where)
    prof = dict(prof)
    for key in PROFILE_KEYS[variant] - {"variant"}:
        if key in prof:
            prof[key] = _num(prof[key], f"{where}.{key}")
    return prof


def _validate_params(cmd: str, params, d: int) -> dict:
    allowed = COMMAND_PARAMS[cmd]
    _keys(params, set(allowed), "params")
    p = copy.deepcopy(allowed)
    p.update(copy.deepcopy(params))
    if "singular" in p:
        p["singular"] = _validate_singular(p["singular"], d, "params.singular")
    if cmd == "fermi-mu":
        if p["rho"] is None:
            raise ConfigError("params.rho is required for fermi-mu")
        p["rho"] = _num(p["rho"], "params.rho", positive=True)
    elif cmd == "sweep":
        p["rho_factor"] = _num(p["rho_factor"], "params.rho_factor", positive=True)
        if not isinstance(p["Llist"], list) or not p["Llist"]:
            raise ConfigError("params.Llist must be a non-empty list")
        p["Llist"] = [_num(L, "params.Llist", positive=True) for L in p["Llist"]]
    elif cmd == "lep-check":
        if not isinstance(p["diagonal"], bool):
            raise ConfigError("params.diagonal must be true or false")
        p["scale"] = _num(p["scale"], "params.scale", positive=True)
    elif cmd == "density-profile":
        if not isinstance(p["points"], list) or not p["points"]:
            raise ConfigError("params.points must be a non-empty list")
        p["points"] = [_vector(x, d, "params.points") for x in p["points"]]
    elif cmd == "condensate-map":
        p["eps"] = _num(p["eps"], "params.eps", positive=True)
        p["extent"] = _num(p["extent"], "params.extent", positive=True)
        p["grid"] = _num(p["grid"], "params.grid", positive=True, integer=True)
        if p["grid"] < 3:
            raise ConfigError("params.grid must be at least 3")
        if not p["singular"]:
            raise ConfigError("params.singular must not be empty for condensate-map")
    elif cmd == "finite-dim-check":
        p["models"] = _num(p["models"], "params.models", positive=True, integer=True)
        p["n_max"] = _num(p["n_max"], "params.n_max", integer=True)
        if not 2 <= p["n_max"] <= 12:
            raise ConfigError("params.n_max must lie in [2, 12]")
        p["observables"] = _num(p["observables"], "params.observables", positive=True, integer=True)
        p["tol"] = _num(p["tol"], "params.tol", positive=True)
        if not isinstance(p["times"], list) or not p["times"]:
            raise ConfigError("params.times must be a non-empty list")
        p["times"] = [_num(t, "params.times") for t in p["times"]]
        if p["eigenvalues"] is not None:
            ev = p["eigenvalues"]
            if not isinstance(ev, list) or not 2 <= len(ev) <= 12:
                raise ConfigError("params.eigenvalues must list between 2 and 12 numbers")
            p["eigenvalues"] = sorted(_num(x, "params.eigenvalues", nonneg=True) for x in ev)
        if not isinstance(p["profiles"], list) or not p["profiles"]:
            raise ConfigError("params.profiles must be a non-empty list")
        p["profiles"] = [_validate_profile(pr, f"params.profiles[{i}]") for i, pr in enumerate(p["profiles"])]
    return p
