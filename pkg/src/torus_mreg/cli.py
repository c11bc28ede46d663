"""Command-line experiment runner.

Usage::

    torus-mreg <scenario> [--config path] [--out path] [--seed N] [--threads N] [--csv]
    torus-mreg jodeit verify --order J --grid N --out report.json
    torus-mreg weights apconst --w w.json --p 2
    torus-mreg weights rdf --g g.json --phi lp2 --tol 1e-8
    torus-mreg aee solve --config p.json --f f.json --out u.json
    torus-mreg aee characterize --config p.json --gamma 3 --out report.json

Every report is JSON with a ``payload`` holding the echoed inputs and all
numbers, which is identical for a fixed seed whatever the thread count, and
a ``generated_at`` timestamp outside of it.  Exit codes: 0 pass, 2 fail
findings, 1 errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._parallel import ENV_THREADS, resolve_threads

SCENARIOS = (
    "jodeit-verify",
    "symbol-check",
    "besov-norm",
    "multiplier-bound",
    "weights-lab",
    "extrapolate",
    "deleeuw",
    "aee-solve",
    "aee-characterize",
    "aee-mr-experiment",
)

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending path."""


# -- config helpers ----------------------------------------------------------------

class _Params:
    """Parameter object that remembers its path for error messages."""

    def __init__(self, data: dict, path: str = "params", base: Path | None = None):
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected an object")
        self.data, self.path, self.base = data, path, base or Path.cwd()
        self.used: dict = {}

    def get(self, key, default=None, cast=None):
        val = self.data.get(key, default)
        if cast is not None and val is not None:
            try:
                val = cast(val)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{self.path}.{key}: {exc}") from None
        self.used[key] = val
        return val

    def load(self, key, loader, default=None):
        """Parse ``key`` with ``loader``; strings are read as JSON files relative to the config."""
        obj = self.data.get(key)
        where = f"{self.path}.{key}"
        if obj is None:
            self.used[key] = None if default is None else "default"
            return default
        if isinstance(obj, str) and obj.endswith(".json"):
            obj = _read_json(self.base / obj, where)
        self.used[key] = obj
        try:
            return loader(obj)
        except ConfigError:
            raise
        except KeyError as exc:
            raise ConfigError(f"{where}: missing key {exc}") from None
        except (TypeError, ValueError, IndexError) as exc:
            raise ConfigError(f"{where}: {exc}") from None


def _read_json(path: Path, where: str = "config"):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"{where}: file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{where}: invalid JSON in {path} (line {exc.lineno}, column {exc.colno})") from None


def _plain(obj):
    """Convert numpy scalars and arrays to JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    return obj


def _symbol(obj):
    from .symbols import OperatorSymbol
    return OperatorSymbol.from_json(obj)


def _continuous_symbol(obj, K: int = 64):
    """``"hilbert"``, ``"identity"``, ``"psi"`` or a discrete symbol spec extended by the smooth kernel."""
    from .jodeit import build_kernel, extension
    from .spaces import LittlewoodPaley
    from .symbols import ContinuousSymbol

    if isinstance(obj, str):
        named = {"hilbert": ContinuousSymbol.hilbert, "identity": ContinuousSymbol.identity,
                 "psi": lambda: LittlewoodPaley(4).symbol()}
        if obj not in named:
            raise ValueError(f"unknown symbol name {obj!r} (expected one of {sorted(named)})")
        return named[obj]()
    m = _symbol(obj)
    return extension(build_kernel(4), m.restricted(-K - 3, K + 3) if m.kmin is None else m)


def _function_values(obj, G: int, rng: np.random.Generator) -> np.ndarray:
    """A nonnegative function on the ``G``-point grid from samples, a trig polynomial or ``"random"``."""
    from .fourier import TrigPolynomial, synthesize
    from .weights import Weight

    if isinstance(obj, list):
        v = np.abs(np.asarray(obj, dtype=float))
    elif isinstance(obj, dict) and "samples" in obj and "kind" not in obj:
        v = np.abs(np.asarray(obj["samples"], dtype=float))
    elif obj == "random" or obj is None:
        v = rng.random(G) + 0.05
    elif "coeffs" in obj:
        v = synthesize(TrigPolynomial.from_json(obj), G).pointwise_norm()
    else:
        v = Weight.from_json(obj).samples
    if v.size != G:
        if G % v.size:
            raise ValueError(f"function has {v.size} samples, which does not divide the grid {G}")
        v = np.repeat(v, G // v.size)
    return v


def _trig(obj, dim: int, order: int, rng: np.random.Generator):
    from .fourier import TrigPolynomial

    if obj is None or obj == "random":
        return TrigPolynomial.random(dim, order, rng)
    if "random" in obj:
        r = obj["random"]
        return TrigPolynomial.random(int(r.get("dim", dim)), int(r.get("order", order)), rng,
                                     bool(r.get("mean_zero", False)))
    return TrigPolynomial.from_json(obj)


# -- scenarios -------------------------------------------------------------------
# Each returns (payload, verdict, csv tables, traceability names).

def _jodeit_verify(P: _Params, seed: int, threads):
    from .jodeit import build_kernel, sample_kernel, verify_kernel

    J = P.get("order", 4, int)
    grid = P.get("grid", 4096, int)
    slope = P.get("slope_at_zero", 1.5, float)
    curv = P.get("curvature_at_zero", 1.0, float)
    tol = P.get("tolerances", {}) or {}
    kernel = build_kernel(J, slope, curv)
    rep = verify_kernel(kernel, grid)
    passed = rep.passed(float(tol.get("identity", 1e-8)), float(tol.get("value", 1e-12)),
                        float(tol.get("partition", 1e-10)), float(tol.get("junction", 1e-10)))
    payload = {"report": rep.to_json(), "passed": passed,
               "coefficients": [float(c) for c in kernel.base]}
    tables = {
        "identities": (["identity", "residual"], [[k, v] for k, v in rep.identities.items()]),
        "kernel": (["t", "lambda", "lambda_1", "lambda_2", "lambda_3"], sample_kernel(kernel).tolist()),
    }
    trace = ["kernel partition identity", "kernel first-derivative identities",
             "kernel second-derivative identities", "integer interpolation", "junction smoothness"]
    return payload, "PASS" if passed else "FAIL", tables, trace


def _symbol_check(P: _Params, seed: int, threads):
    from .jodeit import build_kernel, extension
    from .symbols import OperatorSymbol, condition_report, forward_difference, operator_norms

    K = P.get("K", 64, int)
    gamma = P.get("gamma", 3, int)
    m = P.load("symbol", _symbol, OperatorSymbol.seeded_random(2, seed=seed))
    if not m.defined_on(-K, K + gamma):
        raise ConfigError(f"params.symbol: must be defined on [-{K}, {K + gamma}]")
    rep = condition_report(m, K, gamma)
    ks = np.arange(-K, K + 1)
    ext = extension(build_kernel(4), m)
    restriction_error = float(np.max(operator_norms(ext(ks.astype(float)) - m(ks))))
    passed = all(rep.bounded.values()) and restriction_error <= 1e-12
    payload = {"K": K, "gamma": gamma, "conditions": rep.to_json(),
               "extension_restriction_error": restriction_error, "passed": passed}
    rows = [[int(k)] + [float(abs(k) ** l * operator_norms(forward_difference(m, l, k)))
                        for l in range(gamma + 1)] for k in ks]
    tables = {"per_k": (["k"] + [f"k^{l}*Delta^{l}" for l in range(gamma + 1)], rows)}
    trace = ["discrete Marcinkiewicz condition", "dyadic variation condition", "extension restricts to m"]
    return payload, "PASS" if passed else "FAIL", tables, trace


def _besov(P: _Params, seed: int, threads):
    from .spaces import (LittlewoodPaley, SmoothnessSpace, SpaceDescriptor, besov_norm,
                         dyadic_block, parse_exponent, triebel_lizorkin_norm)

    rng = np.random.default_rng(seed)
    f = P.load("f", lambda o: _trig(o, 1, 16, rng), None) or _trig(None, 1, 16, rng)
    kind = P.get("kind", "Besov", str)
    s = P.get("s", 0.5, float)
    q = P.get("q", 2.0, parse_exponent)
    base = P.load("space", SpaceDescriptor.from_json, None) or SpaceDescriptor.from_json({"kind": "Lp", "p": P.get("p", 2.0, parse_exponent)})
    lp = LittlewoodPaley(P.get("J", 4, int))
    try:
        space = SmoothnessSpace(kind, s, q, base, lp)
    except ValueError as exc:
        raise ConfigError(f"params: {exc}") from None
    norm = besov_norm(f, space) if kind == "Besov" else triebel_lizorkin_norm(f, space)
    from .fourier import synthesize
    from .spaces import default_grid
    G = max(default_grid(f.order), base.grid_size or 0)
    rows = []
    for j in LittlewoodPaley.active_blocks(f.order):
        blk = synthesize(dyadic_block(f, j, lp), G).pointwise_norm()
        rows.append([j, float(2.0 ** (s * j) * base.norm_of_values(blk))])
    payload = {"kind": kind, "s": s, "q": q if math.isfinite(q) else "inf",
               "space": base.to_json(), "order": f.order, "norm": norm}
    return payload, "INFO", {"per_j": (["j", "weighted_block_norm"], rows)}, ["dyadic block norms"]


def _multiplier_bound(P: _Params, seed: int, threads):
    from .aee import dyadic_norm_table
    from .spaces import SpaceDescriptor
    from .symbols import OperatorSymbol

    K = P.get("K", 64, int)
    m = P.load("symbol", _symbol, OperatorSymbol.seeded_random(2, seed=seed))
    space = P.load("space", SpaceDescriptor.from_json, None) or SpaceDescriptor.from_json("lp2")
    table = dyadic_norm_table(m, space, K, n_probes=P.get("n_probes", 8, int), seed=seed,
                              threads=threads)
    rows = [[r["j"], r["lower"], r["upper"], r["l1"]] for r in table["blocks"]]
    payload = {"K": K, "space": space.to_json(), **table}
    return (payload, "PASS" if table["consistent"] else "FAIL",
            {"per_j": (["j", "lower", "upper", "kernel_l1"], rows)},
            ["dyadic pieces bounded by the maximal operator", "smooth extension of discrete symbols"])


def _weights_lab(P: _Params, seed: int, threads):
    from .spaces import WeightedLp
    from .weights import Weight, ap_constant, maximal_norm_estimate

    w = P.load("weight", Weight.from_json, None) or Weight.power_law(0.5, 256)
    ps = P.get("p", [2.0])
    ps = [float(p) for p in (ps if isinstance(ps, list) else [ps])]
    out, bounded = {}, True
    for p in ps:
        ap = ap_constant(w, p)
        entry = {"ap_constant": ap.to_json()}
        if not ap.unbounded and p > 1:
            entry["maximal"] = maximal_norm_estimate(WeightedLp(p, w), seed=seed,
                                                     threads=threads).to_json()
        bounded &= not ap.unbounded
        out[str(p)] = entry
    from .fourier import grid_points
    rows = np.column_stack([grid_points(w.G), w.samples]).tolist()
    payload = {"weight": {"kind": w.kind, "G": w.G, **w.params}, "results": out, "in_Ap": bounded}
    return payload, "PASS" if bounded else "FAIL", {"weight": (["t", "w"], rows)}, ["Muckenhoupt constant"]


def _extrapolate(P: _Params, seed: int, threads):
    from .spaces import SpaceDescriptor
    from .weights import build_aq_weight, maximal_function, maximal_norm_estimate, rubio_de_francia

    rng = np.random.default_rng(seed)
    G = P.get("G", 256, int)
    tol = P.get("tol", 1e-8, float)
    q = P.get("q", 2.0, float)
    space = P.load("phi", SpaceDescriptor.from_json, None) or SpaceDescriptor.from_json("lp2")
    if space.grid_size is not None:
        G = space.grid_size
    n_pairs = P.get("n_pairs", 1, int)
    M_est = maximal_norm_estimate(space, G=G, seed=seed, threads=threads)
    g_given = P.load("g", lambda o: _function_values(o, G, rng))
    h_given = P.load("h", lambda o: _function_values(o, G, rng))
    rdf_only = P.get("rdf_only", False, bool)
    results, ok = [], True
    for i in range(n_pairs):
        g = g_given if (g_given is not None and i == 0) else _function_values("random", G, rng)
        R = rubio_de_francia(g, space, M_est, tol)
        Rg = R.weight.samples
        C = M_est.effective
        slack = float(np.max(maximal_function(Rg) - 2.0 * C * Rg))
        entry = {"iterations": R.iterations, "dominates": bool(np.all(Rg >= np.abs(g) - 1e-15)),
                 "maximal_slack": slack, "next_term_sup": R.next_term_sup,
                 "maximal_ok": bool(slack <= tol)}
        ok &= entry["dominates"] and entry["maximal_ok"]
        if not rdf_only:
            h = h_given if (h_given is not None and i == 0) else _function_values("random", G, rng)
            aq = build_aq_weight(g, h, q, space, M_est, tol=tol, seed=seed)
            entry["aq"] = aq.to_json()
            entry["aq"]["within_bound_5pct"] = bool(aq.ap.value <= 1.05 * aq.bound)
            ok &= entry["aq"]["within_bound_5pct"]
        results.append(entry)
    payload = {"space": space.to_json(), "G": G, "q": q, "tol": tol, "maximal": M_est.to_json(),
               "pairs": results, "passed": ok}
    trace = ["Rubio de Francia iteration", "factorized A_q weight", "A_q constant bound"]
    return payload, "PASS" if ok else "FAIL", {}, trace


def _deleeuw(P: _Params, seed: int, threads):
    from .weights import Weight, deleeuw_restriction_check

    m = P.load("symbol", _continuous_symbol, None)
    if m is None:
        m = _continuous_symbol("hilbert")
    w = P.load("weight", Weight.from_json, None)
    rep = deleeuw_restriction_check(m, p=P.get("p", 2.0, float), w=w, order=P.get("order", 8, int),
                                    n_probes=P.get("n_probes", 16, int), seed=seed,
                                    G=P.get("G", 256, int), periods=P.get("periods", 16, int),
                                    threads=threads)
    return (rep.to_json(), "PASS" if rep.passed else "FAIL", {},
            ["restriction of line multipliers to the integers"])


def _problem(P: _Params):
    from .aee import AeeProblem
    prob = P.load("problem", AeeProblem.from_json, None)
    if prob is None:
        raise ConfigError(f"{P.path}.problem: required")
    return prob


def _aee_solve(P: _Params, seed: int, threads):
    from .aee import residual, solve, strong_solution_ingredients

    prob = _problem(P)
    rng = np.random.default_rng(seed)
    f = P.load("f", lambda o: _trig(o, prob.dim, min(prob.K, 16), rng), None)
    if f is None:
        f = _trig(None, prob.dim, min(prob.K, 16), rng)
    u = solve(prob, f)
    res = residual(prob, u, f)
    fnorm = float(np.max(np.linalg.norm(f.coeffs, axis=1))) if f.coeffs.size else 0.0
    rel = res / fnorm if fnorm > 0 else res
    passed = rel <= P.get("tolerance", 1e-9, float)
    payload = {"residual": res, "relative_residual": rel, "u": u.to_json(),
               "ingredients": strong_solution_ingredients(prob, u), "passed": passed}
    rows = [[int(k), float(np.linalg.norm(c))] for k, c in zip(u.frequencies, u.coeffs)]
    return (payload, "PASS" if passed else "FAIL", {"per_k": (["k", "abs_u_hat"], rows)},
            ["symbol of the equation", "spectral solution formula"])


def _aee_characterize(P: _Params, seed: int, threads):
    from .aee import characterize, verify_difference_identities

    prob = _problem(P)
    K = P.get("K", prob.K, int)
    gamma = P.get("gamma", 3, int)
    rep = characterize(prob, K, gamma)
    payload = {"K": K, "gamma": gamma, "report": rep.to_json()}
    if rep.bijective and K > 3:
        payload["difference_identities"] = verify_difference_identities(prob, K)
    ok = not rep.implication["counterexamples"]
    trace = ["maximal regularity characterization", "well-posedness characterization",
             "difference identities of the solution symbol", "joint convolution condition"]
    return payload, "PASS" if ok else "FAIL", {}, trace


def _aee_mr(P: _Params, seed: int, threads):
    from .aee import maximal_regularity_experiment
    from .spaces import SpaceDescriptor

    prob = _problem(P)
    space = P.load("space", SpaceDescriptor.from_json, None) or SpaceDescriptor.from_json("lp2")
    rep = maximal_regularity_experiment(prob, space, n_probes=P.get("n_probes", 8, int),
                                        seed=seed, threads=threads)
    rows = [[name, r["j"], r["lower"], r["upper"]] for name, t in rep["symbols"].items()
            for r in t["blocks"]]
    return (rep, "PASS" if rep["consistent"] else "FAIL",
            {"per_j": (["symbol", "j", "lower", "upper"], rows)},
            ["dyadic pieces bounded by the maximal operator", "solution decomposition symbols"])


_RUNNERS = {
    "jodeit-verify": _jodeit_verify,
    "symbol-check": _symbol_check,
    "besov-norm": _besov,
    "multiplier-bound": _multiplier_bound,
    "weights-lab": _weights_lab,
    "extrapolate": _extrapolate,
    "deleeuw": _deleeuw,
    "aee-solve": _aee_solve,
    "aee-characterize": _aee_characterize,
    "aee-mr-experiment": _aee_mr,
}


def run(scenario: str, config: dict | None = None, seed: int | None = None,
        threads: int | None = None, base: Path | None = None) -> tuple[dict, str, dict]:
    """Run a scenario and return ``(report, verdict, csv tables)``."""
    if scenario not in _RUNNERS:
        raise ConfigError(f"scenario: unknown scenario {scenario!r} (expected one of {', '.join(SCENARIOS)})")
    config = dict(config or {})
    if "scenario" in config and config["scenario"] != scenario:
        raise ConfigError(f"scenario: config names {config['scenario']!r} but {scenario!r} was requested")
    if seed is None:
        seed = config.get("seed", 0)
    try:
        seed = int(seed)
    except (TypeError, ValueError):
        raise ConfigError("seed: expected an integer") from None
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("seed: must be a 64-bit unsigned integer")
    threads = resolve_threads(threads if threads is not None else config.get("threads"))
    if "params" in config:
        params = config["params"]
    else:
        params = {k: v for k, v in config.items() if k not in ("scenario", "seed", "threads")}
        if "P" in params:  # a bare problem file
            params = {"problem": params}
    P = _Params(params, "params", base)
    payload, verdict, tables, trace = _RUNNERS[scenario](P, seed, threads)
    payload = {"scenario": scenario, "seed": seed, "inputs": P.used, "results": payload,
               "verdict": verdict, "traceability": trace, "version": __version__}
    report = {"generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
              "threads": threads, "payload": _plain(payload)}
    return report, verdict, tables


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


# -- argument parsing ------------------------------------------------------------

def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write the JSON report here (default: stdout)")
    parser.add_argument("--seed", type=int, help="random seed (overrides the config)")
    parser.add_argument("--threads", type=int, help=f"worker threads (default: ${ENV_THREADS} or 1)")
    parser.add_argument("--csv", action="store_true", help="write per-index CSV sidecars next to the report")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torus-mreg", description="Periodic multiplier and maximal regularity experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in SCENARIOS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", help="JSON config")
        _common(p)

    jod = sub.add_parser("jodeit", help="kernel tools").add_subparsers(dest="action", required=True)
    p = jod.add_parser("verify", help="check the kernel identities")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--grid", type=int, default=4096)
    _common(p)

    wts = sub.add_parser("weights", help="weight tools").add_subparsers(dest="action", required=True)
    p = wts.add_parser("apconst", help="A_p constant of a weight")
    p.add_argument("--w", required=True, help="weight JSON")
    p.add_argument("--p", type=float, default=2.0)
    _common(p)
    p = wts.add_parser("rdf", help="Rubio de Francia iteration")
    p.add_argument("--g", required=True, help="function JSON (samples or trig polynomial)")
    p.add_argument("--phi", default="lp2", help="space shorthand or JSON file")
    p.add_argument("--tol", type=float, default=1e-8)
    _common(p)

    aee = sub.add_parser("aee", help="problem tools").add_subparsers(dest="action", required=True)
    p = aee.add_parser("solve", help="spectral solve")
    p.add_argument("--config", required=True, help="problem JSON")
    p.add_argument("--f", help="forcing JSON (default: seeded random)")
    _common(p)
    p = aee.add_parser("characterize", help="regularity flags")
    p.add_argument("--config", required=True, help="problem JSON")
    p.add_argument("--gamma", type=int, default=3)
    _common(p)
    return parser


def _group_config(args) -> tuple[str, dict, Path]:
    """Translate the grouped subcommands into a scenario and its parameters."""
    cwd = Path.cwd()
    if args.command == "jodeit":
        return "jodeit-verify", {"order": args.order, "grid": args.grid}, cwd
    if args.command == "weights":
        if args.action == "apconst":
            return "weights-lab", {"weight": _read_json(Path(args.w), "--w"), "p": [args.p]}, cwd
        phi = args.phi if not args.phi.endswith(".json") else str(Path(args.phi).resolve())
        return "extrapolate", {"g": _read_json(Path(args.g), "--g"), "phi": phi, "tol": args.tol,
                               "rdf_only": True}, cwd
    problem = _read_json(Path(args.config), "--config")
    base = Path(args.config).resolve().parent  # nested file references are relative to the problem
    if args.action == "solve":
        params = {"problem": problem}
        if args.f:
            params["f"] = _read_json(Path(args.f), "--f")
        return "aee-solve", params, base
    return "aee-characterize", {"problem": problem, "gamma": args.gamma}, base


def main(argv=None) -> int:
    parser = _build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    known = set(SCENARIOS) | {"jodeit", "weights", "aee"}
    if argv and not argv[0].startswith("-") and argv[0] not in known:
        print(f"torus-mreg: error: unknown scenario {argv[0]!r} (expected one of {', '.join(SCENARIOS)})",
              file=sys.stderr)
        return EXIT_ERROR
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_ERROR
    try:
        if args.command in SCENARIOS:
            scenario = args.command
            if args.config:
                path = Path(args.config)
                config, base = _read_json(path, "--config"), path.resolve().parent
            else:
                config, base = {}, Path.cwd()
            if not isinstance(config, dict):
                raise ConfigError("config: expected a JSON object")
        else:
            scenario, config, base = _group_config(args)
            config = {"params": config}
        report, verdict, tables = run(scenario, config, args.seed, args.threads, base)
    except ConfigError as exc:
        print(f"torus-mreg: config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # numerical errors surfaced from the library
        print(f"torus-mreg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    text = dumps(report)
    if args.out:
        out = Path(args.out)
        out.write_text(text + "\n")
        stem = out.with_suffix("")
    else:
        print(text)
        stem = Path.cwd() / scenario
    if args.csv:
        for name, (header, rows) in tables.items():
            _write_csv(Path(f"{stem}.{name}.csv"), header, rows)
    print(f"{scenario}: {verdict}", file=sys.stderr)
    return EXIT_FAIL if verdict == "FAIL" else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
