"""Command-line front end.

Every command prints one canonical JSON report (sorted keys, fixed schema)
and exits with 0 when all checks pass, 1 when a check fails and 2 on usage
errors.  Settings come from built-in defaults, then an optional config file
of ``key=value`` lines with dotted keys, then ``--set key=value`` flags.

Configuration keys
------------------
grid.*, contact_grid.*, fundamental_grid.*, s3_grid.*
    Sampling grids: shells, r_min, r_max, sphere_points, time_samples,
    homotopy_samples, seed.
tol.conformal, tol.conformal_fd, tol.fundamental, tol.main, tol.first_integral
    Tolerances of the corresponding checks.
ode.steps_per_unit
    RK4 steps per unit of flow time for the distinguished map.
spectrum.depth
    Number of multiples listed by ``spectrum``.
s3.step, s3.sweep
    Extraction step and comma-separated alpha sweep of ``s3-loop``.
pipeline.count, pipeline.seed
    Cylinder sample of ``pipeline``.
main.check_count, main.refine
    Sample size of the invariant checks of ``a`` and local refinement starts.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import __version__
from .anchors import anchor
from .geometry import SamplingGrid, conformal_factor_check, rho
from .report import BoundReport, plain

SCHEMA_VERSION = 1

GRID_KEYS = ("shells", "r_min", "r_max", "sphere_points", "time_samples",
             "homotopy_samples", "seed")


def _grid_defaults(prefix: str, **over) -> dict:
    base = SamplingGrid()
    vals = {k: getattr(base, k) for k in GRID_KEYS}
    vals.update(over)
    return {f"{prefix}.{k}": v for k, v in vals.items()}


DEFAULTS: Dict[str, object] = {
    **_grid_defaults("grid"),
    **_grid_defaults("contact_grid", shells=4, r_min=0.1, r_max=2.0, sphere_points=256,
                     time_samples=16, homotopy_samples=1),
    **_grid_defaults("fundamental_grid", shells=4, r_min=0.25, r_max=4.0, sphere_points=128,
                     time_samples=16, homotopy_samples=16),
    **_grid_defaults("s3_grid", shells=1, r_min=1.0, r_max=1.0, sphere_points=2048,
                     time_samples=64, homotopy_samples=1),
    "tol.conformal": 1e-8,
    "tol.conformal_fd": 1e-5,
    "tol.fundamental": 1e-6,
    "tol.main": 1e-3,
    "tol.first_integral": 1e-5,
    "ode.steps_per_unit": 512,
    "spectrum.depth": 64,
    "s3.step": 1e-6,
    "s3.sweep": "0.02,0.05,0.1,0.2,0.3,0.4,0.5",
    "pipeline.count": 10000,
    "pipeline.seed": 0,
    "main.check_count": 1000,
    "main.refine": 0,
}

POSITIVE_KEYS = {"tol.conformal", "tol.conformal_fd", "tol.fundamental", "tol.main",
                 "tol.first_integral", "ode.steps_per_unit", "spectrum.depth", "s3.step",
                 "pipeline.count", "main.check_count"}


class UsageError(Exception):
    """Invalid arguments or configuration (exit code 2)."""


# ---------------------------------------------------------------------------
# configuration


def _coerce(key: str, raw: str):
    default = DEFAULTS[key]
    try:
        if isinstance(default, bool):
            return raw.strip().lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise UsageError(f"bad value for {key}: {raw!r}") from None
    return raw.strip()


def parse_config_text(text: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in DEFAULTS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, raw)
    return out


def load_config(path: Optional[str], overrides: List[str]) -> dict:
    """Defaults, then the config file, then ``--set`` overrides."""
    cfg = dict(DEFAULTS)
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        cfg.update(parse_config_text(text))
    for item in overrides:
        cfg.update(parse_config_text(item))
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict):
    for key in POSITIVE_KEYS:
        if not cfg[key] > 0:
            raise UsageError(f"{key} must be positive")
    for prefix in ("grid", "contact_grid", "fundamental_grid", "s3_grid"):
        try:
            grid_from(cfg, prefix)
        except ValueError as exc:
            raise UsageError(f"{prefix}: {exc}") from None
    try:
        _floats(cfg["s3.sweep"])
    except ValueError:
        raise UsageError("s3.sweep must be comma-separated numbers") from None


def grid_from(cfg: dict, prefix: str) -> SamplingGrid:
    return SamplingGrid(**{k: cfg[f"{prefix}.{k}"] for k in GRID_KEYS})


def _floats(text: str) -> List[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


def config_hash(cfg: dict, params: dict) -> str:
    blob = json.dumps({"config": plain(cfg), "parameters": plain(params)},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# report assembly


class Checks:
    """Ordered collection of named check entries with anchors."""

    def __init__(self):
        self.entries: Dict[str, dict] = {}
        self.reports: Dict[str, BoundReport] = {}

    def bound(self, name: str, rep: BoundReport, key: str):
        self.reports[name] = rep
        self.entries[name] = {"kind": "bound", "anchor": anchor(key), "report": rep}

    def value(self, name: str, key: str, passed: bool = True, **data):
        self.entries[name] = {"kind": "value", "anchor": anchor(key), "passed": bool(passed),
                              **data}

    def passed(self) -> bool:
        return all(_entry_passed(e) for e in self.entries.values())

    def as_dict(self, timings: bool) -> dict:
        out = {}
        for name, e in self.entries.items():
            if e["kind"] == "bound":
                d = e["report"].to_dict(timings)
                d["anchor"] = e["anchor"]
            else:
                d = {k: v for k, v in e.items() if k != "kind"}
            out[name] = plain(d)
        return out


def _entry_passed(e: dict) -> bool:
    return bool(e["report"].passed) if e["kind"] == "bound" else bool(e["passed"])


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


# ---------------------------------------------------------------------------
# commands


def cmd_verify_map(args, cfg, ctx) -> Checks:
    from .maps import (make_loop_embedding, make_planck_map, make_squeeze_pair,
                       make_twist, planck_target_form, rotation_path)

    g = grid_from(cfg, "contact_grid")
    tol, tol_fd = cfg["tol.conformal"], cfg["tol.conformal_fd"]
    ch = Checks()
    Ns = [args.N] if args.N else [1, 2, 3, 4]
    want = args.map
    if want in ("all", "twist"):
        for N in Ns:
            F = make_twist(N, args.n)
            rep = conformal_factor_check(F, g, tol)
            c, z = rep.details["factors"], rep.details["z"]
            err = float(np.max(np.abs(c - 1 / (1 + N * rho(z)))))
            rep.details["factor_error"] = err
            rep.passed = rep.passed and err < tol
            ch.bound(f"twist_N{N}", rep, "twist")
            ch.bound(f"twist_N{N}_fd", conformal_factor_check(F, g, tol_fd, use_fd=True), "twist")
    if want in ("all", "loop-embedding"):
        for N in Ns:
            h = rotation_path(np.full(args.n, float(N)), f"e[{N}t]")
            Psi = make_loop_embedding(h, h.hamiltonian)
            ch.bound(f"loop_embedding_N{N}", conformal_factor_check(Psi, g, tol), "loop_embedding")
    if want in ("all", "squeeze-pair"):
        Phi, Psi = make_squeeze_pair(args.n)
        for m in (Phi, Psi):
            ch.bound(f"squeeze_pair_{m.name}", conformal_factor_check(m, g, tol), "squeeze_pair")
    if want in ("all", "planck"):
        P = make_planck_map(args.hbar, args.n)
        rep = conformal_factor_check(P, g, tol, target_form=planck_target_form)
        h = 2 * np.pi * args.hbar
        err = float(np.max(np.abs(rep.details["factors"] - h)) / h)
        rep.details["factor_error"] = err
        rep.details["h"] = h
        rep.passed = rep.passed and err < 1e-10
        ch.bound("planck", rep, "planck")
    return ch


def cmd_verify_loop(args, cfg, ctx) -> Checks:
    from .maps import compose_paths, make_unitary_generators, rotation_path, time_scaled
    from .verify import loop_positivity_check, positivity_check

    g = grid_from(cfg, "grid")
    ch = Checks()
    n = args.n
    if args.loop == "rotation":
        rot = rotation_path(np.ones(n))
        ch.bound("positivity", positivity_check(rot.hamiltonian, g, args.margin), "equivariance")
    elif args.loop == "unconjugated":
        gen = make_unitary_generators(n)
        path = compose_paths(rotation_path(-np.ones(n)), time_scaled(gen["f"], 3.0))
        ch.bound("positivity", positivity_check(path.hamiltonian, g, args.margin), "s3_loop")
    return ch


def cmd_s3_loop(args, cfg, ctx) -> Checks:
    from .verify import s3_loop_check, s3_threshold_table

    g = grid_from(cfg, "s3_grid")
    ch = Checks()
    rep = s3_loop_check(args.alpha, g, cfg["s3.step"])
    ch.bound("positivity", rep, "s3_loop")
    if not args.no_sweep:
        table = s3_threshold_table(_floats(cfg["s3.sweep"]), g)
        ch.value("threshold_table", "s3_loop", True, **table)
        ctx["csv_rows"] = table["rows"]
    return ch


def _main_loop_objects(args, cfg, ctx):
    from .distinguished import (build_distinguished_map, build_main_loop,
                                choose_shift_params, warm_cache)

    params = choose_shift_params(args.n)
    a = build_distinguished_map(params, cfg["ode.steps_per_unit"])
    loop = build_main_loop(a)
    g = grid_from(cfg, "grid")
    hit = warm_cache(loop, g.sphere(args.n), g.svalues(),
                     Path(args.cache) if args.cache else None)
    ctx["cache_hit"] = hit
    return params, a, loop, g


def cmd_mu(args, cfg, ctx) -> Checks:
    from .distinguished import delta_mu_report

    params, a, loop, g = _main_loop_objects(args, cfg, ctx)
    mu = delta_mu_report(loop, g, cfg["main.refine"])
    ch = Checks()
    ch.value("mu_hat", "mu", 0.8 <= mu.mu_hat <= 1.05, band=[0.8, 1.05], **mu.to_dict())
    return ch


def cmd_main_loop(args, cfg, ctx) -> Checks:
    from .distinguished import check_distinguished_map, delta_mu_report, main_loop_bounds

    params, a, loop, g = _main_loop_objects(args, cfg, ctx)
    ch = Checks()
    ch.value("shift_params", "shift_params", params.is_valid(), n=params.n, nu=params.nu,
             c=params.c, lam=params.lam, pi_nu_c2=params.x, lower_bound=params.lower_bound())
    ch.value("ode", "distinguished", True, **a.diagnostics)
    inv = check_distinguished_map(a, cfg["main.check_count"],
                                  tol_first_integral=cfg["tol.first_integral"])
    keys = {"first_integral": "first_integral", "inclusion_W": "inclusion_W",
            "equivariance": "equivariance", "symplectic": "distinguished"}
    for name, rep in inv.items():
        ch.bound(name, rep, keys.get(name, "first_integral"))
    bounds = main_loop_bounds(loop, g, cfg["tol.main"])
    keys = {"positivity": "main_positivity", "step1_nonneg": "step1",
            "step2_nonneg": "step2", "closure": "closure"}
    for name, rep in bounds.items():
        ch.bound(name, rep, keys[name])
    mu = delta_mu_report(loop, g, cfg["main.refine"])
    ch.value("mu_hat", "mu", 0.8 <= mu.mu_hat <= 1.05, band=[0.8, 1.05], **mu.to_dict())
    return ch


def cmd_fundamental(args, cfg, ctx) -> Checks:
    from .verify import conjugated_rotation_check, fundamental_inequality_check

    g = grid_from(cfg, "fundamental_grid")
    ch = Checks()
    ch.bound("inequality", fundamental_inequality_check(args.n, g, cfg["tol.fundamental"]),
             "fundamental")
    if args.n >= 2:
        small = SamplingGrid(shells=2, sphere_points=64, time_samples=8, homotopy_samples=4)
        ch.bound("conjugated_rotation", conjugated_rotation_check(args.n, small),
                 "conjugated_rotation")
    return ch


def cmd_squeeze_verdict(args, cfg, ctx) -> Checks:
    from .squeeze import squeezing_verdict

    v = squeezing_verdict(args.n, args.R1, args.R2, args.target, args.R3)
    ch = Checks()
    ch.value("verdict", _verdict_key(v), True, verdict=v.verdict, theorem=v.theorem,
             summary=str(v), params=v.params)
    return ch


def _verdict_key(v) -> str:
    from .anchors import ANCHORS

    for key, text in ANCHORS.items():
        if text == v.theorem:
            return key
    return "open_window"


def cmd_squeeze_plan(args, cfg, ctx) -> Checks:
    from .squeeze import iteration_plan

    N, traj = iteration_plan(args.R1, args.R2, args.gamma)
    ch = Checks()
    ch.value("plan", "iteration", True, N=N, trajectory=traj)
    ctx["csv_rows"] = [{"k": k, "R": r} for k, r in enumerate(traj)]
    return ch


def cmd_pipeline(args, cfg, ctx) -> Checks:
    from .verify import cylinder_sample, squeeze_pipeline_check

    K = cylinder_sample(args.n, cfg["pipeline.count"], cfg["pipeline.seed"])
    ch = Checks()
    ch.bound("pipeline", squeeze_pipeline_check(args.n, K, shift=args.shift), "pipeline")
    return ch


def cmd_cz(args, cfg, ctx) -> Checks:
    from .index import SymplecticPath, catenate, cz_index, maslov_index

    rates = _floats(args.rates)
    path = SymplecticPath.rotation(rates, args.samples)
    cz = cz_index(path)
    expected = int(sum(-2 * math.floor(r) for r in rates))
    ch = Checks()
    ch.value("cz", "cz", cz == expected, cz=cz, diagonal_formula=expected, rates=rates)
    if args.loop:
        ks = [int(k) for k in _floats(args.loop)]
        if len(ks) != len(rates):
            raise UsageError("--loop needs one integer per rate")
        loop = SymplecticPath.rotation(ks, args.samples)
        m = maslov_index(loop)
        cat = cz_index(catenate(path, loop))
        ch.value("maslov", "maslov", m == 2 * sum(ks), maslov=m)
        ch.value("catenation", "cz", cat == cz - m, cz_catenated=cat, expected=cz - m)
    return ch


def cmd_ch_ellipsoid(args, cfg, ctx) -> Checks:
    from .index import EllipsoidSpec, ch_ellipsoid, ellipsoid_degree_by_flow

    spec = EllipsoidSpec(args.n, args.N, args.R)
    group = ch_ellipsoid(spec)
    (degree,) = group.ranks
    flow = ellipsoid_degree_by_flow(spec)
    ch = Checks()
    ch.value("ch", "ellipsoid", flow == degree, degree=degree, ranks=group.ranks,
             flow_degree=flow)
    return ch


def cmd_spectrum(args, cfg, ctx) -> Checks:
    from .index import EllipsoidSpec, action_spectrum

    spec = EllipsoidSpec(args.n, args.N, args.R)
    sp = action_spectrum(spec, cfg["spectrum.depth"])
    ch = Checks()
    ch.value("spectrum", "spectrum", True, values=sp.values, depth=sp.depth,
             non_resonant=sp.non_resonant)
    ctx["csv_rows"] = [{"action": float(v)} for v in sp.values]
    return ch


def cmd_profile(args, cfg, ctx) -> Checks:
    from .index import F_parameters, profile_F, profile_transform

    a, b, c = Fraction(args.a), Fraction(args.b), Fraction(args.c)
    if not (0 < a < b < 1 and c > 1):
        raise UsageError("need 0 < a < b < 1 and c > 1")
    bar = profile_transform(profile_F(a, b, c))
    pa, pb, pc = F_parameters(bar)
    twice = profile_transform(bar)
    ch = Checks()
    ch.value("transform", "profile", (pa, pb, pc) == (a / c, b, 1 / c),
             F=[a, b, c], Fbar=[pa, pb, pc], expected=[a / c, b, 1 / c])
    ch.value("involution", "profile", twice.nodes == profile_F(a, b, c).nodes,
             nodes=[list(p) for p in twice.nodes])
    G = bar.shifted(-1)
    ch.value("G_relation", "profile", G.nodes == ((a / c, 1 / c - 1), (b, 0)),
             G=[a / c, b, 1 / c - 1])
    return ch


def cmd_olshanskii(args, cfg, ctx) -> Checks:
    from .olshanskii import build_c0, contact_cone, orderability_verdict, root_system, su21_structure

    st = su21_structure()
    roots = root_system()
    c0 = build_c0()
    verdict = orderability_verdict(contact_cone(), c0.c0)
    ch = Checks()
    ch.value("killing", "olshanskii", st.Q == ((2, 1), (1, 2)),
             Q=[list(r) for r in st.Q], scale=st.killing_scale)
    ch.value("roots", "olshanskii", True,
             roots=[{"vector": list(r.vector), "compact": r.compact,
                     "noncompact": r.noncompact} for r in roots])
    ch.value("c0", "olshanskii", c0.c0.same_as(c0.c_min), H1=list(c0.H1), Z=list(c0.Z),
             H0=list(c0.H0), c1=c0.c1.as_dict(), c0=c0.c0.as_dict())
    ch.value("verdict", "olshanskii", verdict.verdict == "non-orderable", **verdict.as_dict())
    return ch


COMMANDS: Dict[str, Tuple[Callable, str]] = {
    "verify-map": (cmd_verify_map, "contactness of the explicit maps"),
    "verify-loop": (cmd_verify_loop, "positivity of a loop Hamiltonian"),
    "s3-loop": (cmd_s3_loop, "positive loop on the three-sphere and alpha sweep"),
    "mu": (cmd_mu, "mu estimate of the contraction of the main loop"),
    "fundamental": (cmd_fundamental, "fundamental inequality on a grid"),
    "squeeze-verdict": (cmd_squeeze_verdict, "squeezing trichotomy for balls"),
    "squeeze-plan": (cmd_squeeze_plan, "iteration count of the squeezing scheme"),
    "pipeline": (cmd_pipeline, "cylinder squeezing chain on a sample"),
    "cz": (cmd_cz, "Conley-Zehnder index of a diagonal rotation path"),
    "ch-ellipsoid": (cmd_ch_ellipsoid, "contact homology of an ellipsoid"),
    "spectrum": (cmd_spectrum, "action spectrum of an ellipsoid"),
    "profile": (cmd_profile, "profile transform of F_{a,b,c}"),
    "olshanskii": (cmd_olshanskii, "su(2,1) structure and orderability verdict"),
    "main-loop": (cmd_main_loop, "distinguished map, main loop and bounds"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of key=value lines")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--output", help="write the report to this file")
    common.add_argument("--csv", action="store_true", help="emit a flat CSV table")
    common.add_argument("--timings", action="store_true", help="include runtimes")
    p = argparse.ArgumentParser(
        prog="contactforge", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name):
        return sub.add_parser(name, parents=[common], help=COMMANDS[name][1])

    s = add("verify-map")
    s.add_argument("--map", default="all",
                   choices=["all", "twist", "loop-embedding", "squeeze-pair", "planck"])
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--hbar", type=float, default=0.3)
    s = add("verify-loop")
    s.add_argument("--loop", default="rotation", choices=["rotation", "unconjugated"])
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--margin", type=float, default=0.0)
    s = add("s3-loop")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--no-sweep", action="store_true")
    for name in ("mu", "main-loop"):
        s = add(name)
        s.add_argument("--n", type=int, default=2)
        s.add_argument("--cache", help="directory for the flow cache")
    s = add("fundamental")
    s.add_argument("--n", type=int, default=2)
    s = add("squeeze-verdict")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--R1", type=float, required=True)
    s.add_argument("--R2", type=float, required=True)
    s.add_argument("--R3", type=float, default=None)
    s.add_argument("--target", default="ball", choices=["ball", "cylinder"])
    s = add("squeeze-plan")
    s.add_argument("--R1", type=float, required=True)
    s.add_argument("--R2", type=float, required=True)
    s.add_argument("--gamma", type=float, default=1.0)
    s = add("pipeline")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--shift", type=float, default=None)
    s = add("cz")
    s.add_argument("--rates", required=True, help="comma-separated a_j of exp(2 pi i a_j t)")
    s.add_argument("--loop", help="comma-separated integers k_j of a loop to catenate")
    s.add_argument("--samples", type=int, default=1025)
    for name in ("ch-ellipsoid", "spectrum"):
        s = add(name)
        s.add_argument("--n", type=int, default=2)
        s.add_argument("--N", type=int, default=1)
        s.add_argument("--R", type=float, required=True)
    s = add("profile")
    s.add_argument("--a", required=True, help="rational, e.g. 1/4")
    s.add_argument("--b", required=True)
    s.add_argument("--c", required=True)
    add("olshanskii")
    return p


RUN_KEYS = {"config", "set", "output", "csv", "timings", "command"}


def run(argv: Optional[List[str]] = None) -> Tuple[dict, int, str]:
    """Execute one command; returns ``(document, exit_code, rendered_text)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = load_config(args.config, args.set)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in RUN_KEYS}
    ctx: dict = {}
    func = COMMANDS[args.command][0]
    start = time.perf_counter()
    try:
        checks = func(args, cfg, ctx)
    except (ValueError, ArithmeticError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from None
    passed = checks.passed()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "contactforge",
        "version": __version__,
        "command": args.command,
        "parameters": params,
        "config": cfg,
        "config_hash": config_hash(cfg, params),
        "checks": checks.as_dict(args.timings),
        "passed": passed,
    }
    if "cache_hit" in ctx:
        doc["cache"] = {"used": bool(getattr(args, "cache", None))}
    if args.timings:
        doc["runtime"] = time.perf_counter() - start
        if "cache_hit" in ctx:
            doc["cache"]["hit"] = ctx["cache_hit"]
    doc = _jsonable(plain(doc))
    text = render_csv(doc, ctx) if args.csv else json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    return doc, (0 if passed else 1), text


def render_csv(doc: dict, ctx: dict) -> str:
    """Flat table: command-specific rows, else one row per check."""
    rows = ctx.get("csv_rows")
    if rows is None:
        rows = []
        for name, entry in doc["checks"].items():
            rows.append({"check": name, "passed": entry.get("passed"),
                         "min_value": entry.get("min_value", ""), "anchor": entry["anchor"]})
    rows = [_jsonable(plain(r)) for r in rows]
    buf = io.StringIO()
    fields = list(rows[0].keys()) if rows else ["check"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def main(argv: Optional[List[str]] = None) -> int:
    try:
        doc, code, text = run(argv)
    except UsageError as exc:
        print(f"contactforge: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
