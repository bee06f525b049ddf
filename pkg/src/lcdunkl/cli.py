"""Command-line entry point: transform, estimate, verify.

One flat JSON config per run; every default is filled in and echoed
into the output metadata so any reported number can be reproduced.
Data files carry no timestamps and are written atomically.
"""

import argparse
import json
import math
import os
import sys
import tempfile

from . import verify as verify_mod
from .corpus import bump_profile, gauss_profile, realize_bump
from .errors import ParameterError, RangeError, ResourceBudgetError, ShapeMismatchError
from .operators import RealPolynomial
from .paleywiener import (
    compact_spectrum_test,
    estimate_delta,
    estimate_sigma,
    poly_domain_test,
    support_radius_oracle,
    vanishing_interval_detect,
)
from .specfun import CanonicalMatrix
from .symfun import expr_from_json
from .transform import lcdt_forward

DEFAULT_CONFIG = {
    "k": 0.5,
    "matrix": {"a": 1.0, "b": 1.0, "c": 0.0, "d": 1.0},
    "grid": {
        "x_radius": 10.0,
        "x_panels": 40,
        "x_nodes": 16,
        "lambda_radius": 14.0,
        "lambda_panels": 48,
        "lambda_nodes": 14,
    },
    "function": {"type": "bump", "intervals": [[1.0, 2.0]], "symmetrize": False},
    "estimator": {"p": 2.0, "n_max": 30, "method": "ratio", "poly": [0.0, 0.0, 0.25]},
}


class ConfigError(Exception):
    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


def _merge_defaults(cfg):
    out = json.loads(json.dumps(DEFAULT_CONFIG))
    for key, val in (cfg or {}).items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key].update(val)
        else:
            out[key] = val
    return out


def _load_config(path):
    if path is None:
        return _merge_defaults({})
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("config", f"cannot read config: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a JSON object")
    return _merge_defaults(raw)


def _build_context(cfg):
    try:
        k = float(cfg["k"])
    except (TypeError, ValueError):
        raise ConfigError("k", "must be a real number")
    m = cfg["matrix"]
    try:
        M = CanonicalMatrix(m["a"], m["b"], m["c"], m["d"])
    except ParameterError as exc:
        raise ConfigError(f"matrix.{'b' if 'matrix.b' in str(exc) else 'det'}", str(exc))
    except (KeyError, TypeError) as exc:
        raise ConfigError("matrix", f"needs numeric entries a, b, c, d: {exc}")
    fn = cfg["function"]
    kind = fn.get("type")
    if kind == "bump":
        intervals = fn.get("intervals")
        if not intervals or not all(len(pair) == 2 and pair[0] < pair[1] for pair in intervals):
            raise ConfigError("function.intervals", "need nonempty [lo, hi] pairs with lo < hi")
        intervals = tuple(tuple(float(v) for v in pair) for pair in intervals)
        if fn.get("symmetrize"):
            intervals = tuple((-hi, -lo) for lo, hi in intervals) + intervals
        try:
            prof = bump_profile(k, intervals, b=M.b)
        except ParameterError as exc:
            raise ConfigError("function.intervals", str(exc))
        return k, M, prof, ("bump", intervals)
    if kind == "symexpr":
        try:
            expr = expr_from_json(fn["expr"])
        except (KeyError, ParameterError) as exc:
            raise ConfigError("function.expr", f"invalid expression: {exc}")
        g = cfg["grid"]
        try:
            prof = gauss_profile(
                k,
                X=float(g["x_radius"]),
                x_panels=int(g["x_panels"]),
                x_nodes=int(g["x_nodes"]),
                L=float(g["lambda_radius"]),
                l_panels=int(g["lambda_panels"]),
                l_nodes=int(g["lambda_nodes"]),
            )
        except ParameterError as exc:
            raise ConfigError("grid", str(exc))
        return k, M, prof, ("symexpr", expr)
    raise ConfigError("function.type", f"must be 'bump' or 'symexpr', got {kind!r}")


def _atomic_write(path, text):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def cmd_transform(cfg, out_dir):
    k, M, prof, (kind, data) = _build_context(cfg)
    if kind == "bump":
        f, spec = realize_bump(k, M, data, prof)
        g = lcdt_forward(f, k, M, prof.lam_rule)
    else:
        g = lcdt_forward(data, k, M, prof.lam_rule, x_rule=prof.x_rule)
    os.makedirs(out_dir, exist_ok=True)
    _atomic_write(os.path.join(out_dir, "spectrum.csv"), g.to_csv_text())
    payload = json.loads(g.to_json_text())
    payload["config"] = cfg
    _atomic_write(os.path.join(out_dir, "spectrum.json"), _json_text(payload))
    return 0


def cmd_estimate(cfg, which, out_dir):
    k, M, prof, (kind, data) = _build_context(cfg)
    est_cfg = cfg["estimator"]
    p = math.inf if est_cfg.get("p") in ("inf", math.inf) else float(est_cfg.get("p", 2.0))
    n_max = int(est_cfg.get("n_max", 30))
    method = est_cfg.get("method", "ratio")
    if kind == "bump":
        physical, spec = realize_bump(k, M, data, prof)
        spectral_input = spec
        oracle = support_radius_oracle(spec, 1e-10)
    else:
        physical, spectral_input, oracle = data, None, None

    kwargs = {"lam_rule": prof.lam_rule, "x_rule": prof.x_rule}
    if which == "sigma":
        res = estimate_sigma(physical, k, M, p=p, n_max=n_max, method=method, **kwargs)
    elif which == "delta":
        res = estimate_delta(spectral_input if spectral_input is not None else physical,
                             k, M, p=p, n_max=max(n_max, 40), **kwargs)
    elif which == "poly":
        P = RealPolynomial(tuple(est_cfg.get("poly", [0.0, 0.0, 0.25])))
        res = poly_domain_test(spectral_input if spectral_input is not None else physical,
                               k, M, P, p=p, n_max=max(n_max, 40), **kwargs)
    elif which == "compact":
        res = compact_spectrum_test(spectral_input if spectral_input is not None else physical,
                                    k, M, p=p, n_max=max(n_max, 40), **kwargs)
    elif which == "vanishing":
        res = vanishing_interval_detect(spectral_input if spectral_input is not None else physical,
                                        k, M, p=p, n_max=max(n_max, 40), **kwargs)
    else:
        raise ConfigError("which", f"unknown estimator {which!r}")
    os.makedirs(out_dir, exist_ok=True)
    report = res.to_report()
    report["which"] = which
    if oracle is not None:
        report["support_radius_oracle"] = oracle
    report["sequence_csv"] = "sequence.csv"
    report["config"] = cfg
    # infinities are not valid JSON; report them as strings
    for key, val in list(report.items()):
        if isinstance(val, float) and math.isinf(val):
            report[key] = "inf"
    _atomic_write(os.path.join(out_dir, "sequence.csv"), res.sequence.to_csv_text())
    _atomic_write(os.path.join(out_dir, "report.json"), _json_text(report))
    return 0


def cmd_verify(suite, out_dir):
    report = verify_mod.run(suite)
    os.makedirs(out_dir, exist_ok=True)
    _atomic_write(os.path.join(out_dir, "verify_report.json"), _json_text(report))
    for c in report["checks"]:
        flag = "PASS" if c["passed"] else "FAIL"
        print(f"[{flag}] {c['suite']}/{c['name']}: measured={c['measured']:.6g} tol={c['tolerance']:.6g}")
    print(f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed")
    return 0 if report["passed"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lcdunkl", description="linear canonical Dunkl transform toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tr = sub.add_parser("transform", help="forward transform; writes spectrum CSV + JSON")
    p_tr.add_argument("--config", default=None)
    p_tr.add_argument("--out", default="out")

    p_es = sub.add_parser("estimate", help="run a spectral-support estimator")
    p_es.add_argument("--config", default=None)
    p_es.add_argument("--out", default="out")
    p_es.add_argument("--which", default="sigma",
                      choices=["sigma", "delta", "poly", "compact", "vanishing"])

    p_ve = sub.add_parser("verify", help="run the built-in verification suites")
    p_ve.add_argument("--config", default=None)
    p_ve.add_argument("--out", default="out")
    p_ve.add_argument("--suite", default="all",
                      choices=["all", "specfun", "transform", "operators", "sobolev", "pw"])

    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.suite, args.out)
        cfg = _load_config(args.config)
        if args.command == "transform":
            return cmd_transform(cfg, args.out)
        return cmd_estimate(cfg, args.which, args.out)
    except ConfigError as exc:
        print(json.dumps({"error": {"field": exc.field, "message": exc.message}}, sort_keys=True))
        return 2
    except (ParameterError, RangeError, ShapeMismatchError, ResourceBudgetError) as exc:
        print(json.dumps({"error": {"field": "parameters", "message": str(exc)}}, sort_keys=True))
        return 2


if __name__ == "__main__":
    sys.exit(main())
