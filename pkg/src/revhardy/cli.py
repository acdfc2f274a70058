"""Command-line front end.

Every run emits one report envelope (JSON, CSV or text).  Settings come from
built-in defaults, then an optional INI file (``[run]`` and a section named
after the command), then command-line flags.

Exit codes: 0 verified / trivially_holds, 1 violated / inconclusive,
2 invalid parameters or configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import itertools
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, fields, is_dataclass
from typing import Any

import numpy as np

from . import __version__
from .bilinear import HLS_STRICT_NOTE, hls_param_check, hls_params, sw_param_check, verify_sw
from .closedform import (PowerParams, hardy_constant_conjugate, hardy_constant_direct,
                         solve_beta)
from .errors import (ConfigError, InadmissibleExponent, InvalidExponents, NumericalError,
                     RevHardyError)
from .exponents import lower_factor, make_exponents
from .hardy import (HardyOptions, RadialWeight, d1_profile, d2_profile, power_weights,
                    proof_identity_check, verify_hardy)
from .quadrature import QuadratureConfig
from .spaces import SPHERE_NOTE, ball_volume_mc, make_space, sphere_area

SCHEMA_VERSION = 1
COMMANDS = ("check-hardy", "check-conjugate-hardy", "compute-constant", "check-hls",
            "check-stein-weiss", "scan", "sphere-area", "proof-identities")
VERDICTS = ("verified", "violated", "inconclusive", "trivially_holds", "invalid_params")
EXIT_CODES = {"verified": 0, "trivially_holds": 0, "violated": 1, "inconclusive": 1,
              "invalid_params": 2}
MAX_SCAN_ROWS = 100_000
SPREAD_TOL = 1e-6
SPHERE_AGREE = 5e-3
SCAN_COLUMNS = ("p", "q", "alpha", "beta_solved", "case", "D", "factor", "c_lower",
                "monotone_verdict", "reason", "numeric_spread")

_EUCLIDEAN_AREA = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


# name, type, default, help
OPTIONS = [
    ("space", str, "euclidean:1", "euclidean:<n>, heisenberg:1 or hyperbolic:<n>"),
    ("p", float, None, "exponent p < 0"),
    ("q", float, None, "exponent q <= p"),
    ("alpha", float, None, "power of the weight u (or |x|^alpha in the bilinear form)"),
    ("beta", float, None, "power of the weight v; solved from the balance condition if omitted"),
    ("family_count", int, 50, "size of the seeded test family"),
    ("pair_count", int, 10, "number of (f, h) pairs for the bilinear checks"),
    ("chain_count", int, 0, "number of h for the proof-chain checks"),
    ("seed", int, 0, "base seed"),
    ("rel_tol", float, 1e-9, "quadrature relative tolerance"),
    ("abs_tol", float, 1e-12, "quadrature absolute tolerance"),
    ("mc_samples", int, 200_000, "Monte Carlo samples per estimate"),
    ("sphere_method", str, "quadrature", "quadrature or mc"),
    ("sphere_samples", int, 1_000_000, "samples for the Monte Carlo ball volume"),
    ("numeric_check", _bool, False, "add quadrature cross-checks to closed forms"),
    ("p_grid", str, "-3:-0.25:12", "scan grid for p: start:stop:num or a comma list"),
    ("q_grid", str, "-3:-0.25:12", "scan grid for q"),
    ("alpha_grid", str, "-2:2:5", "scan grid for alpha"),
    ("check_rows", int, 20, "scan rows re-checked by quadrature with --numeric-check"),
    ("t_count", int, 10, "number of log-spaced radii in [1e-2, 1e2]"),
    ("output", str, None, "write the report here instead of stdout"),
    ("format", str, "json", "json, csv or text"),
]
_TYPES = {name: typ for name, typ, _, _ in OPTIONS}
_DEFAULTS = {name: default for name, _, default, _ in OPTIONS}

REQUIRED = {
    "check-hardy": ("p", "q", "alpha"),
    "check-conjugate-hardy": ("p", "q", "alpha"),
    "compute-constant": ("p", "q", "alpha"),
    "check-hls": ("p", "q"),
    "check-stein-weiss": ("p", "q", "alpha", "beta"),
    "scan": (),
    "sphere-area": (),
    "proof-identities": ("p", "beta"),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    space: str = "euclidean:1"
    p: float | None = None
    q: float | None = None
    alpha: float | None = None
    beta: float | None = None
    family_count: int = 50
    pair_count: int = 10
    chain_count: int = 0
    seed: int = 0
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    mc_samples: int = 200_000
    sphere_method: str = "quadrature"
    sphere_samples: int = 1_000_000
    numeric_check: bool = False
    p_grid: str = "-3:-0.25:12"
    q_grid: str = "-3:-0.25:12"
    alpha_grid: str = "-2:2:5"
    check_rows: int = 20
    t_count: int = 10
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        for name in REQUIRED[self.command]:
            if getattr(self, name) is None:
                raise ConfigError(f"{self.command} needs --{name.replace('_', '-')}")
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isfinite(v):
                raise ConfigError(f"{f.name} must be finite, got {v}")
        if self.format not in ("json", "csv", "text"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.sphere_method not in ("quadrature", "mc"):
            raise ConfigError(f"unknown sphere method {self.sphere_method!r}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        for name in ("family_count", "pair_count", "mc_samples", "sphere_samples", "t_count"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.chain_count < 0 or self.check_rows < 0:
            raise ConfigError("counts must be non-negative")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ConfigError("tolerances must be positive")

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(rel_tol=self.rel_tol, abs_tol=self.abs_tol)

    def echo(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _convert(name, value):
    if name not in _TYPES:
        raise ConfigError(f"unknown config key {name!r}")
    if value is None:
        return None
    try:
        return _TYPES[name](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {name}: {value!r} ({exc})") from None


def read_config_file(path: str, command: str) -> dict:
    """Keys from ``[run]`` then ``[<command>]``; dashes and underscores are equivalent."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    for section in ("run", command):
        if parser.has_section(section):
            for key, value in parser.items(section):
                name = key.replace("-", "_")
                out[name] = _convert(name, value)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revhardy",
        description="Check reverse Hardy, HLS and Stein-Weiss inequalities with negative exponents.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", default=argparse.SUPPRESS, help="INI file; flags override it")
        for name, typ, _, help_ in OPTIONS:
            flag = "--" + name.replace("_", "-")
            if typ is _bool:
                sp.add_argument(flag, dest=name, action="store_const", const=True,
                                default=argparse.SUPPRESS, help=help_)
            else:
                sp.add_argument(flag, dest=name, type=typ, default=argparse.SUPPRESS,
                                help=help_)
    return parser


def resolve_config(argv: list[str] | None = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    merged = dict(_DEFAULTS)
    path = ns.pop("config", None)
    if path is not None:
        merged.update(read_config_file(path, command))
    merged.update(ns)
    return RunConfig(command=command, **merged)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@dataclass
class Outcome:
    result: Any
    verdict: str
    derived: dict
    seeds: list
    warnings: list


def _space(cfg: RunConfig):
    return make_space(cfg.space, cfg.sphere_method, cfg.sphere_samples, cfg.seed)


def _space_warnings(space) -> list[str]:
    if space.group is not None and not space.name.startswith("euclidean"):
        return [SPHERE_NOTE]
    return []


def _exps_derived(exps) -> dict:
    return {"p_conj": exps.p_conj, "q_conj": exps.q_conj}


def _beta(cfg: RunConfig, space) -> tuple[float, bool]:
    if cfg.beta is not None:
        return cfg.beta, False
    return solve_beta(cfg.alpha, space.Q, cfg.p, cfg.q), True


def run_hardy(cfg: RunConfig, conjugate: bool) -> Outcome:
    space = _space(cfg)
    exps = make_exponents(cfg.p, cfg.q)
    beta, solved = _beta(cfg, space)
    opts = HardyOptions(config=cfg.quadrature)
    rep = verify_hardy(space, power_weights(cfg.alpha, beta), exps, options=opts,
                       conjugate=conjugate, family_count=cfg.family_count, seed=cfg.seed)
    result = rep.to_dict()
    result["beta"] = beta
    result["beta_solved"] = solved
    derived = _exps_derived(exps)
    if solved:
        derived["beta"] = beta
    return Outcome(result, rep.verdict, derived, [cfg.seed],
                   list(rep.warnings) + _space_warnings(space))


def run_compute_constant(cfg: RunConfig) -> Outcome:
    space = _space(cfg)
    exps = make_exponents(cfg.p, cfg.q)
    beta, solved = _beta(cfg, space)
    case = "direct" if cfg.alpha + space.Q > 0 else "conjugate"
    pp = PowerParams(space.Q, space.sphere_area, cfg.alpha, beta, exps, case)
    fn = hardy_constant_direct if case == "direct" else hardy_constant_conjugate
    result = dict(fn(pp), case=case, beta=beta, beta_solved=solved, Q=space.Q,
                  sphere_area=space.sphere_area)
    verdict = "verified"
    if cfg.numeric_check:
        prof = (d1_profile if case == "direct" else d2_profile)(
            space, power_weights(cfg.alpha, beta), exps, np.logspace(-2, 2, 5), cfg.quadrature)
        dev = float(np.max(np.abs(prof.values - result["D"]) / result["D"]))
        result["numeric"] = {"profile": prof.to_dict(), "max_rel_deviation": dev}
        if dev > SPREAD_TOL:
            verdict = "violated"
    derived = _exps_derived(exps)
    if solved:
        derived["beta"] = beta
    return Outcome(result, verdict, derived, [], _space_warnings(space))


def _bilinear_outcome(cfg, space, params, extra_warnings=()) -> Outcome:
    rep = verify_sw(space, params, n_samples=cfg.mc_samples, seed=cfg.seed,
                    pair_count=cfg.pair_count, chain_count=cfg.chain_count,
                    config=cfg.quadrature)
    derived = _exps_derived(params.exps)
    derived["lambda"] = params.lam
    warnings = list(extra_warnings) + list(rep.warnings) + _space_warnings(space)
    return Outcome(rep.to_dict(), rep.verdict, derived, rep.seeds, warnings)


def run_hls(cfg: RunConfig) -> Outcome:
    space = _space(cfg)
    check = hls_param_check(space, cfg.p, cfg.q)
    out = _bilinear_outcome(cfg, space, hls_params(space, cfg.p, cfg.q), [HLS_STRICT_NOTE])
    out.result["param_check"] = check
    return out


def run_sw(cfg: RunConfig) -> Outcome:
    space = _space(cfg)
    params = sw_param_check(space, cfg.p, cfg.q, cfg.alpha, cfg.beta)
    extra = [HLS_STRICT_NOTE] if cfg.p == cfg.q else []
    return _bilinear_outcome(cfg, space, params, extra)


def parse_grid(text: str) -> list[float]:
    """``start:stop:num`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return [float(x) for x in np.linspace(float(a), float(b), int(n))]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"bad grid {text!r}") from None


def scan_rows(space, ps, qs, alphas, numeric_rows: int = 0, config=None) -> list[dict]:
    """One row per ``(p, q, alpha)``; inadmissible tuples carry a reason code."""
    rows = []
    for p, q, a in itertools.product(ps, qs, alphas):
        row = dict.fromkeys(SCAN_COLUMNS, "")
        row.update(p=p, q=q, alpha=a)
        try:
            exps = make_exponents(p, q)
        except InvalidExponents:
            row["reason"] = "exponent_order"
            rows.append(row)
            continue
        beta = solve_beta(a, space.Q, p, q)
        case = "direct" if a + space.Q > 0 else "conjugate"
        row.update(beta_solved=beta, case=case, factor=lower_factor(exps))
        try:
            fn = hardy_constant_direct if case == "direct" else hardy_constant_conjugate
            c = fn(PowerParams(space.Q, space.sphere_area, a, beta, exps, case))
        except InadmissibleExponent:
            row["reason"] = "boundary_exponent"
            rows.append(row)
            continue
        # balance makes the profile constant, hence monotone both ways
        row.update(D=c["D"], c_lower=c["c_lower"],
                   monotone_verdict="non_decreasing" if case == "direct" else "non_increasing")
        rows.append(row)
    ok = [r for r in rows if r["reason"] == ""]
    if numeric_rows and ok:
        picks = np.unique(np.linspace(0, len(ok) - 1, min(numeric_rows, len(ok))).astype(int))
        for i in picks:
            r = ok[i]
            fn = d1_profile if r["case"] == "direct" else d2_profile
            prof = fn(space, power_weights(r["alpha"], r["beta_solved"]),
                      make_exponents(r["p"], r["q"]), np.logspace(-2, 2, 9), config)
            r["numeric_spread"] = prof.spread
            r["monotone_verdict"] = prof.monotone_verdict
    return rows


def run_scan(cfg: RunConfig) -> Outcome:
    space = _space(cfg)
    ps, qs, al = parse_grid(cfg.p_grid), parse_grid(cfg.q_grid), parse_grid(cfg.alpha_grid)
    if len(ps) * len(qs) * len(al) > MAX_SCAN_ROWS:
        raise ConfigError(f"scan grid exceeds {MAX_SCAN_ROWS} rows")
    rows = scan_rows(space, ps, qs, al, cfg.check_rows if cfg.numeric_check else 0,
                     cfg.quadrature)
    ok = [r for r in rows if r["reason"] == ""]
    bad_factor = sum(1 for r in rows if r["factor"] != "" and r["factor"] > 1.0)
    bad_spread = sum(1 for r in ok if r["numeric_spread"] != "" and r["numeric_spread"] > SPREAD_TOL)
    verdict = "violated" if bad_factor or bad_spread else "verified"
    summary = {"rows": len(rows), "admissible": len(ok),
               "max_factor": max((r["factor"] for r in rows if r["factor"] != ""), default=None),
               "factor_violations": bad_factor, "spread_violations": bad_spread}
    return Outcome({"columns": list(SCAN_COLUMNS), "rows": rows, "summary": summary},
                   verdict, {}, [], _space_warnings(space))


def run_sphere_area(cfg: RunConfig) -> Outcome:
    space = _space(cfg)
    result = {"space": space.name, "Q": space.Q, "method": cfg.sphere_method,
              "sphere_area": space.sphere_area, "unit_ball_volume": space.sphere_area / space.Q}
    verdict = "verified"
    seeds = [cfg.seed] if cfg.sphere_method == "mc" else []
    if space.name.startswith("euclidean"):
        ref = _EUCLIDEAN_AREA[space.topological_dim]
        err = abs(space.sphere_area - ref) / ref
        result.update(reference=ref, rel_error=err)
        tol = 1e-6 if cfg.sphere_method == "quadrature" else SPHERE_AGREE
        if err > tol:
            verdict = "violated"
    if cfg.numeric_check and space.group is not None:
        quad = sphere_area(space.group, "quadrature")
        mc = ball_volume_mc(space.group, 1.0, cfg.sphere_samples, cfg.seed)
        mc_area = space.Q * mc.mean
        diff = abs(mc_area - quad) / quad
        result["cross_check"] = {"quadrature": quad, "mc": mc_area,
                                 "mc_std_error": space.Q * mc.std_error, "rel_diff": diff}
        seeds = [cfg.seed]
        if diff > SPHERE_AGREE:
            verdict = "violated"
    return Outcome(result, verdict, {}, seeds, _space_warnings(space))


def run_proof_identities(cfg: RunConfig) -> Outcome:
    space = _space(cfg)
    exps = make_exponents(cfg.p, cfg.q if cfg.q is not None else cfg.p)
    t_grid = np.logspace(-2, 2, cfg.t_count)
    rep = proof_identity_check(space, RadialWeight.power(cfg.beta), exps, t_grid, cfg.quadrature)
    return Outcome(rep, "verified" if rep["holds"] else "violated", _exps_derived(exps), [],
                   _space_warnings(space))


DISPATCH = {
    "check-hardy": lambda c: run_hardy(c, conjugate=False),
    "check-conjugate-hardy": lambda c: run_hardy(c, conjugate=True),
    "compute-constant": run_compute_constant,
    "check-hls": run_hls,
    "check-stein-weiss": run_sw,
    "scan": run_scan,
    "sphere-area": run_sphere_area,
    "proof-identities": run_proof_identities,
}


# ---------------------------------------------------------------------------
# envelope and serialisation
# ---------------------------------------------------------------------------

def jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True, ensure_ascii=False)


def payload_hash(envelope: dict) -> str:
    body = {k: v for k, v in envelope.items() if k not in ("timing", "payload_sha256")}
    return hashlib.sha256(_dumps(body).encode("utf-8")).hexdigest()


def make_envelope(cfg: RunConfig | None, outcome: Outcome | None, elapsed: float,
                  error: Exception | None = None, verdict: str | None = None) -> dict:
    env = {
        "schema_version": SCHEMA_VERSION,
        "tool": "revhardy",
        "version": __version__,
        "command": None if cfg is None else cfg.command,
        "config": None if cfg is None else cfg.echo(),
        "derived": {} if outcome is None else outcome.derived,
        "result": None if outcome is None else outcome.result,
        "verdict": verdict or outcome.verdict,
        "seeds": [] if outcome is None else outcome.seeds,
        "warnings": [] if outcome is None else outcome.warnings,
    }
    if error is not None:
        env["error"] = {"type": type(error).__name__, "message": str(error)}
    env = jsonable(env)
    env["payload_sha256"] = payload_hash(env)
    env["timing"] = {"elapsed_s": elapsed}
    return env


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def to_csv(env: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    result = env.get("result") or {}
    if env.get("command") == "scan" and "rows" in result:
        w.writerow(result["columns"])
        for r in result["rows"]:
            w.writerow([r[c] for c in result["columns"]])
        return buf.getvalue()
    w.writerow(["key", "value"])
    for k, v in _flatten({k: v for k, v in env.items() if k != "result"}):
        w.writerow([k, v])
    for k, v in _flatten(result, "result"):
        w.writerow([k, v])
    return buf.getvalue()


def _fmt(v):
    return f"{v:.10g}" if isinstance(v, float) else str(v)


def to_text(env: dict) -> str:
    lines = [f"revhardy {env['version']}  {env['command']}", f"verdict: {env['verdict']}"]
    for k, v in sorted(env.get("derived", {}).items()):
        lines.append(f"  {k} = {_fmt(v)}")
    result = env.get("result")
    if isinstance(result, dict):
        if env.get("command") == "scan" and "rows" in result:
            cols = result["columns"]
            lines.append("  ".join(cols))
            for r in result["rows"]:
                lines.append("  ".join(_fmt(r[c]) for c in cols))
            result = result["summary"]
        for k, v in sorted(result.items()):
            if not isinstance(v, (dict, list)):
                lines.append(f"  {k}: {_fmt(v)}")
    if "error" in env:
        lines.append(f"error: {env['error']['type']}: {env['error']['message']}")
    for w in env.get("warnings", []):
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def render(env: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(env)
    if fmt == "text":
        return to_text(env)
    return _dumps(env) + "\n"


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Dispatch one configuration; returns the envelope and the exit code."""
    t0 = time.perf_counter()
    try:
        outcome = DISPATCH[cfg.command](cfg)
    except NumericalError as exc:
        return make_envelope(cfg, None, time.perf_counter() - t0, exc, "inconclusive"), 3
    except (RevHardyError, ValueError) as exc:
        return make_envelope(cfg, None, time.perf_counter() - t0, exc, "invalid_params"), 2
    env = make_envelope(cfg, outcome, time.perf_counter() - t0)
    return env, EXIT_CODES[env["verdict"]]


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = resolve_config(argv)
    except (ConfigError, ValueError) as exc:
        env = make_envelope(None, None, 0.0, exc, "invalid_params")
        sys.stdout.write(render(env, "json"))
        return 2
    env, code = run(cfg)
    text = render(env, cfg.format)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        sys.stderr.write(f"{cfg.command}: {env['verdict']} -> {cfg.output}\n")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
