"""Command-line front end.

Every command reads a configuration (see :mod:`lepbec.config`), runs one
library operation and writes a JSON record or a CSV table into the output
directory, plus SVG figures for the commands that have a natural picture.

Exit status: 0 on success, 1 when a check fails its tolerance or a
computation is rejected by the library, 2 on configuration errors (no file
is written then).  Diagnostics go to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import config as cfgmod
from . import finite_dim as fd
from . import kernel_engine as ke
from . import mu_solver, observables
from .dispersion import POWER, DispersionRelation
from .errors import ConfigError, LepError
from .statistics import QStatistics, critical_density, critical_mu, density, fermi_solve_mu
from .temperature import check_admissibility, dimension_condition, probe_beta_near_zero, profile_from_config

CSV_COLUMNS = {
    "critical-density": ["value", "errorBound", "verdict"],
    "density": ["value", "errorBound", "verdict"],
    "critical-mu": ["value", "errorBound", "verdict"],
    "fermi-mu": ["value", "errorBound", "verdict"],
    "sweep": ["L", "mu", "mu_ceiling", "condensate_estimate", "rho_c", "residual", "cutoff"],
    "lep-check": ["pair", "residual_abs", "residual_rel"],
    "density-profile": ["x", "density"],
    "condensate-map": ["k1", "k2", "value"],
    "finite-dim-check": ["model", "n", "profile", "leq", "kms", "stationarity", "radon_nikodym"],
    "admissibility": ["check", "ok"],
}

EPILOG = """\
CSV columns by command (after '#' metadata lines and one header row):
""" + "\n".join(f"  {cmd}: {', '.join(cols)}" for cmd, cols in CSV_COLUMNS.items()) + f"""

The density-profile 'x' column holds one position coordinate per axis
(x_0, x_1, ...).  Output goes to output.dir, defaulting to ${cfgmod.OUTPUT_ENV}
or the working directory.

Examples:
  lepbec critical-density
  lepbec lep-check --set 'params.singular=[{{type: point, D: 1.0, k: [0, 0, 0]}}]'
  lepbec sweep --config sweep.yaml --format csv
"""


class Report:
    """Outcome of one command: the record fields, an optional table and
    deferred figure writers."""

    def __init__(self, value=None, error=None, verdict="ok", diagnostics=None, rows=None, columns=None,
                 passed=True):
        self.value = value
        self.error = error
        self.verdict = verdict
        self.diagnostics = diagnostics or {}
        self.rows = rows
        self.columns = columns
        self.passed = passed
        self.figures: list = []


def _plotting():
    # matplotlib is imported only when a figure is drawn
    from . import plotting

    return plotting


def _log(level: str, kind: str, message: str, **extra) -> None:
    sys.stderr.write(json.dumps({"level": level, "kind": kind, "message": message, **extra}, sort_keys=True) + "\n")


def _clean(obj):
    """Plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return obj


# ---------------------------------------------------------------------------
# Model construction
# ---------------------------------------------------------------------------


def build_dispersion(cfg) -> DispersionRelation:
    dc = cfg["model"]["dispersion"]
    if dc["kind"] == POWER:
        return DispersionRelation.power_law(dc["s"], dc["d"])
    return DispersionRelation.relativistic(dc["m"], dc["c"], dc["d"])


def build_profile(pcfg):
    try:
        return profile_from_config(pcfg)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid profile: {exc}") from None


def resolve_mu(cfg, profile) -> float:
    sc = cfg["model"]["stats"]
    if sc["mu"] != "critical":
        return sc["mu"]
    mq = critical_mu(sc["q"], profile, sc["convention"])
    if mq.unbounded:
        raise ConfigError("mu: critical needs q in (0, 1]; give an explicit value")
    return mq.value


def build_kernel(cfg, disp, profile, singular, diagonal=True) -> ke.TwoPointKernel:
    sc = cfg["model"]["stats"]
    stats = QStatistics(sc["q"], resolve_mu(cfg, profile), sc["convention"])
    parts = []
    for p in singular:
        if p["type"] == "point":
            parts.append(ke.PointMass(p["D"], tuple(p["k"])))
        elif p["type"] == "sphere":
            parts.append(ke.SphereAverage(p["D"], p["radius"]))
        elif p["type"] == "atoms":
            parts.append(ke.SurfaceAtoms(tuple((a["w"], tuple(a["p"])) for a in p["atoms"])))
        else:
            parts.append(ke.GradientPointMass(p["D"], None if p.get("axes") is None else tuple(p["axes"])))
    res = ke.Resolution(**cfg["numerics"]["resolution"])
    return ke.TwoPointKernel(stats, profile, disp, tuple(parts), diagonal, res)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _integral_report(res) -> Report:
    rec = res.as_record()
    return Report(rec["value"], rec["errorBound"], rec["verdict"], rec["diagnostics"])


def cmd_critical_density(cfg, disp, profile):
    sc = cfg["model"]["stats"]
    res = critical_density(sc["q"], profile, disp, convention=sc["convention"], rtol=cfg["numerics"]["rtol"])
    return _integral_report(res)


def cmd_density(cfg, disp, profile):
    sc = cfg["model"]["stats"]
    if sc["mu"] == "critical":
        return cmd_critical_density(cfg, disp, profile)
    stats = QStatistics(sc["q"], sc["mu"], sc["convention"])
    return _integral_report(density(stats, profile, disp, rtol=cfg["numerics"]["rtol"]))


def cmd_critical_mu(cfg, disp, profile):
    sc = cfg["model"]["stats"]
    mq = critical_mu(sc["q"], profile, sc["convention"])
    rec = mq.as_record()
    diag = {"flags": rec["flags"], **rec["diagnostics"], "unbounded": mq.unbounded}
    if mq.unbounded:
        return Report(None, None, "unbounded", diag)
    # exact under convention A; under B the sup search refines to 1e-12
    err = 0.0 if sc["convention"] == "A" or mq.value == 0.0 else 1e-12 * max(1.0, abs(mq.value))
    return Report(mq.value, err, "finite", diag)


def cmd_fermi_mu(cfg, disp, profile):
    sc = cfg["model"]["stats"]
    rho = cfg["params"]["rho"]
    mu = fermi_solve_mu(profile, disp, None, rho, sc["convention"])

    def dens(m):
        return density(QStatistics(-1.0, m, sc["convention"]), profile, disp).value

    got = dens(mu)
    h = 1e-6 * max(1.0, abs(mu))
    slope = (dens(mu + h) - dens(mu - h)) / (2 * h)
    err = abs(got - rho) / slope if slope > 0 else math.inf
    return Report(mu, max(err, 1e-14 * max(1.0, abs(mu))), "finite",
                  {"rho_target": rho, "rho_at_mu": got, "relative_residual": got / rho - 1.0})


def cmd_sweep(cfg, disp, profile):
    p = cfg["params"]
    rc = mu_solver.box_critical_density(profile, disp)
    rho = p["rho_factor"] * rc
    rows = mu_solver.thermodynamic_sweep(profile, disp, rho, p["Llist"])
    last = rows[-1]
    excess = rho - rc
    diag = {"rho": rho, "rho_c": rc, "normalisation": "per unit box volume, (2 pi)^-d times the momentum integral",
            "below_ceiling": all(r["mu"] < r["mu_ceiling"] for r in rows)}
    if excess > 0:
        diag["condensate_over_excess"] = last["condensate_estimate"] / excess
    rep = Report(last["condensate_estimate"], None, "condensed" if excess > 0 else "normal", diag,
                 rows=rows, columns=CSV_COLUMNS["sweep"])
    rep.figures.append(("sweep", lambda path: _plotting().sweep_figure(rows, path)))
    return rep


def cmd_lep_check(cfg, disp, profile):
    p, nm = cfg["params"], cfg["numerics"]
    kernel = build_kernel(cfg, disp, profile, p["singular"], p["diagonal"])
    report = ke.validate(kernel)
    rng = np.random.default_rng(nm["seed"])
    rows = []
    worst = 0.0
    for i in range(nm["trials"]):
        f = observables.random_bump(rng, kernel.d, p["scale"])
        g = observables.random_bump(rng, kernel.d, p["scale"])
        res, lhs, rhs = ke.lep_residual(kernel, f, g, detail=True)
        scale = max(abs(lhs), abs(rhs))
        rel = abs(res) / scale if scale > 0 else abs(res)
        worst = max(worst, rel)
        rows.append({"pair": i, "residual_abs": abs(res), "residual_rel": rel})
    ok = worst <= nm["tol"] and report.ok
    diag = {"tolerance": nm["tol"], "validation": report.as_record(), "mu": kernel.stats.mu,
            "mu_q": kernel.critical_mu.as_record()}
    return Report(worst, None, "pass" if ok else "fail", diag, rows=rows, columns=CSV_COLUMNS["lep-check"],
                  passed=ok)


def cmd_density_profile(cfg, disp, profile):
    p = cfg["params"]
    kernel = build_kernel(cfg, disp, profile, p["singular"])
    prof = observables.density_profile(kernel)
    pts = np.asarray(p["points"], dtype=float)
    vals = [float(prof.total(x)) for x in pts]
    rows = [{"x": list(map(float, x)), "density": v} for x, v in zip(pts, vals)]
    diag = {"bulk": prof.bulk, "bulk_verdict": prof.bulk_verdict, "point_mass": prof.point_mass,
            "gradient": {str(k): v for k, v in prof.gradient.items()}}
    rep = Report(vals[0], None, prof.bulk_verdict, diag, rows=rows, columns=CSV_COLUMNS["density-profile"])
    if len(pts) > 1 and all(math.isfinite(v) for v in vals):
        radii = np.linalg.norm(pts, axis=1)
        rep.figures.append(("profile", lambda path: _plotting().profile_figure(
            radii, vals, path, "local density")))
    return rep


def cmd_condensate_map(cfg, disp, profile):
    p = cfg["params"]
    kernel = build_kernel(cfg, disp, profile, p["singular"], diagonal=False)
    k = np.linspace(-p["extent"], p["extent"], p["grid"])
    field_ = observables.condensate_map(kernel, p["eps"], k, k)
    diag = {"eps": p["eps"], "max": float(field_.max())}
    i0 = p["grid"] // 2
    diag["value_at_origin"] = float(field_[i0, i0]) if p["grid"] % 2 else None
    only_gradient = all(isinstance(s, ke.GradientPointMass) for s in kernel.singular)
    value = None
    if only_gradient:
        value = observables.ring_radius(field_, k, k)
        diag["ring_radius"] = value
    rows = [{"k1": float(a), "k2": float(b), "value": float(field_[i, j])}
            for i, a in enumerate(k) for j, b in enumerate(k)]
    rep = Report(value if value is not None else diag["max"], None, "ok", diag, rows=rows,
                 columns=CSV_COLUMNS["condensate-map"])
    rep.figures.append(("map", lambda path: _plotting().heatmap(
        field_, k, k, path, f"mollified condensate, eps = {p['eps']:g}")))
    return rep


def cmd_finite_dim(cfg, disp, profile):
    p, nm = cfg["params"], cfg["numerics"]
    rng = np.random.default_rng(nm["seed"])
    profiles = [build_profile(pc) for pc in p["profiles"]]
    rows = []
    worst = {"leq": 0.0, "kms": 0.0, "stationarity": 0.0, "radon_nikodym": 0.0}
    for i in range(p["models"]):
        j = i % len(profiles)
        if p["eigenvalues"] is not None:
            try:
                model = fd.MatrixModel(tuple(p["eigenvalues"]), profiles[j])
            except ValueError as exc:
                raise ConfigError(f"params.eigenvalues: {exc}") from None
        else:
            model = fd.random_model(rng, profiles[j], n=int(rng.integers(2, p["n_max"] + 1)))
        w = fd.check_suite([model], rng, p["observables"], tuple(p["times"]))
        rows.append({"model": i, "n": model.n, "profile": p["profiles"][j]["variant"], **w})
        worst = {k: max(worst[k], float(w[k])) for k in worst}
    ok = all(v <= p["tol"] for v in worst.values())
    return Report(max(worst.values()), None, "pass" if ok else "fail", {"worst": worst, "tolerance": p["tol"]},
                  rows=rows, columns=CSV_COLUMNS["finite-dim-check"], passed=ok)


def cmd_admissibility(cfg, disp, profile):
    rep = check_admissibility(profile, disp)
    diag = rep.as_record()
    rows = [{"check": k, "ok": diag[k]} for k in ("continuityOk", "infZeroOk", "zeroSetFinite", "tailIntegrable")]
    if profile.alpha0 is not None and profile.alpha_inf is not None and disp.kind == POWER:
        v = dimension_condition(disp.s, disp.d, profile.alpha0, profile.alpha_inf)
        diag["dimension"] = {"convergesAtZero": v.convergesAtZero, "convergesAtInfinity": v.convergesAtInfinity,
                             "condensationPossible": v.condensationPossible}
        rows.append({"check": "condensationPossible", "ok": v.condensationPossible})
    try:
        diag["beta_limsup_at_zero"] = probe_beta_near_zero(profile)[0]
    except LepError as exc:
        diag["beta_limsup_at_zero"] = f"unbounded ({exc})"
    return Report(rep.ok, None, "admissible" if rep.ok else "inadmissible", diag, rows=rows,
                  columns=CSV_COLUMNS["admissibility"], passed=rep.ok)


DISPATCH = {
    "critical-density": cmd_critical_density,
    "density": cmd_density,
    "critical-mu": cmd_critical_mu,
    "fermi-mu": cmd_fermi_mu,
    "sweep": cmd_sweep,
    "lep-check": cmd_lep_check,
    "density-profile": cmd_density_profile,
    "condensate-map": cmd_condensate_map,
    "finite-dim-check": cmd_finite_dim,
    "admissibility": cmd_admissibility,
}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def record(cfg, rep: Report) -> dict:
    rec = {"value": rep.value, "errorBound": rep.error, "verdict": rep.verdict,
           "diagnostics": rep.diagnostics, "config": cfg, "version": __version__}
    if rep.rows is not None:
        rec["table"] = {"columns": rep.columns, "rows": [[r.get(c) for c in rep.columns] for r in rep.rows]}
    return _clean(rec)


def _cell(v):
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_csv(cfg, rep: Report) -> str:
    buf = io.StringIO()
    rec = record(cfg, rep)
    buf.write(f"# lepbec {__version__}\n")
    buf.write(f"# command: {cfg['command']}\n")
    buf.write("# config: " + json.dumps(rec["config"], sort_keys=True) + "\n")
    buf.write("# result: " + json.dumps({k: rec[k] for k in ("value", "errorBound", "verdict")}, sort_keys=True) + "\n")
    columns = rep.columns or CSV_COLUMNS[cfg["command"]]
    buf.write("# columns: " + ",".join(columns) + "\n")
    rows = rep.rows if rep.rows is not None else [{"value": rec["value"], "errorBound": rec["errorBound"],
                                                   "verdict": rec["verdict"]}]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def write_outputs(cfg, rep: Report) -> list[str]:
    out = cfg["output"]
    os.makedirs(out["dir"], exist_ok=True)
    base = os.path.join(out["dir"], out["stem"])
    paths = []
    # render fully before opening the file so a failure leaves nothing behind
    if out["format"] == "json":
        path = base + ".json"
        text = json.dumps(record(cfg, rep), sort_keys=True, indent=2, allow_nan=False) + "\n"
    else:
        path = base + ".csv"
        text = render_csv(cfg, rep)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    paths.append(path)
    if out["figures"]:
        for name, draw in rep.figures:
            paths.append(draw(f"{base}_{name}.svg"))
    return paths


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lepbec", description="Condensation in local-equilibrium quasi-free states",
                                     formatter_class=argparse.RawDescriptionHelpFormatter, epilog=EPILOG)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", help="YAML configuration file")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a configuration entry, e.g. model.stats.q=0.5 (repeatable)")
    common.add_argument("--output-dir", "-o", help=f"output directory (default: ${cfgmod.OUTPUT_ENV} or .)")
    common.add_argument("--format", choices=["json", "csv"], help="output format")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--no-figures", action="store_true", help="skip SVG figures")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    helps = {
        "critical-density": "momentum integral of the occupation number at the critical chemical potential",
        "density": "density at the configured chemical potential",
        "critical-mu": "critical chemical potential for the configured statistics",
        "fermi-mu": "Fermi chemical potential for a target density (params.rho)",
        "sweep": "finite-volume chemical potential along a sequence of boxes",
        "lep-check": "kernel-equation residuals on random test pairs",
        "density-profile": "local density at params.points",
        "condensate-map": "mollified condensate density on the (k1, k2) plane",
        "finite-dim-check": "local equilibrium, KMS and Radon-Nikodym checks on matrix models",
        "admissibility": "admissibility and dimension conditions of the profile",
    }
    for name in cfgmod.COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name] + ".",
                       formatter_class=argparse.RawDescriptionHelpFormatter, epilog=EPILOG)
    return parser


def _flag_overrides(args) -> list[str]:
    out = list(args.overrides)
    if args.output_dir is not None:
        out.append(f"output.dir={json.dumps(args.output_dir)}")
    if args.format is not None:
        out.append(f"output.format={args.format}")
    if args.seed is not None:
        out.append(f"numerics.seed={args.seed}")
    if args.no_figures:
        out.append("output.figures=false")
    return out


def run(cfg: dict) -> tuple[int, Report | None]:
    """Execute a validated configuration and write its outputs.

    Returns the exit status and the report (``None`` when nothing ran).
    """
    try:
        disp = build_dispersion(cfg)
        profile = build_profile(cfg["model"]["profile"])
        rep = DISPATCH[cfg["command"]](cfg, disp, profile)
    except ConfigError as exc:
        _log("error", "ConfigError", str(exc))
        return 2, None
    except LepError as exc:
        _log("error", type(exc).__name__, str(exc), command=cfg["command"])
        return 1, None
    except (ValueError, TypeError) as exc:
        # plain value errors stem from inconsistent model parameters
        _log("error", "ConfigError", str(exc))
        return 2, None
    paths = write_outputs(cfg, rep)
    for p in paths:
        _log("info", "output", "wrote file", path=p)
    if not rep.passed:
        _log("warning", "verdict", f"{cfg['command']} failed: verdict {rep.verdict}", value=_clean(rep.value))
        return 1, rep
    return 0, rep


def main(argv=None) -> int:
    args = create_parser().parse_args(argv)
    try:
        cfg = cfgmod.load(args.config, _flag_overrides(args), args.command)
    except ConfigError as exc:
        _log("error", "ConfigError", str(exc))
        return 2
    return run(cfg)[0]


if __name__ == "__main__":
    sys.exit(main())
