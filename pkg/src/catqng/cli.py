"""Command-line front end: witness values, sweeps, epsilon_max curves, Wigner grids.

Every command writes plot-ready CSV (header + rows, 17 significant digits) or
JSON (``{"config": ..., "rows": ...}``). Exit codes: 0 success, 1 invalid
parameters, 2 numerical failure.

Options may also come from ``--config FILE`` holding ``key = value`` lines
named like the long flags (``alpha = 0.5:1.5:3``); flags on the command line
take precedence.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys

import numpy as np

from . import fock
from .optimize import (
    STRATEGIES,
    OptimizerConfig,
    epsilon_max,
    optimize_displaced_squeezed,
    optimize_odd,
    optimize_squeeze,
    s_opt_analytic,
)
from .phase_space import CatParams, ParameterError, QuadratureError, check_epsilon, lossy_cat_wigner
from .verify import run_checks
from .witness import GaussianOp, witness_delta

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2

SWEEP_COLUMNS = ["alpha", "xi", "epsilon", "s_opt", "beta_opt", "w0", "nbar_op", "bound", "delta", "status"]
EPS_MAX_COLUMNS = ["alpha", "xi", "strategy", "eps_max", "bracket", "status"]
WITNESS_COLUMNS = ["alpha", "xi", "epsilon", "s", "beta", "w0", "nbar_op", "bound", "delta"]

log = logging.getLogger("catqng")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_values(spec: str) -> list[float]:
    """``"0.5"``, ``"0.5,1,1.5"`` or an inclusive range ``"a:b:n"``."""
    out: list[float] = []
    for part in str(spec).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            try:
                a, b, n = part.split(":")
                a, b, n = float(a), float(b), int(n)
            except ValueError as exc:
                raise ParameterError(f"bad range {part!r}; expected a:b:n") from exc
            if n < 1:
                raise ParameterError(f"range {part!r} needs at least one point")
            out.extend(np.linspace(a, b, n).tolist() if n > 1 else [a])
        else:
            try:
                out.append(float(part))
            except ValueError as exc:
                raise ParameterError(f"not a number: {part!r}") from exc
    if any(not math.isfinite(v) for v in out):
        raise ParameterError(f"non-finite value in {spec!r}")
    return out


def _collect(specs) -> list[float]:
    values = [v for spec in (specs or []) for v in parse_values(spec)]
    if not values:
        raise ParameterError("empty parameter grid")
    return values


def _bounds_spec(spec: str | None, default_bounds, default_n):
    """``lo:hi:n`` or ``n`` for an optimiser grid axis."""
    if spec is None:
        return default_bounds, default_n
    parts = str(spec).split(":")
    try:
        if len(parts) == 1:
            return default_bounds, int(parts[0])
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError) as exc:
        raise ParameterError(f"bad grid spec {spec!r}; expected n or lo:hi:n") from exc
    return (lo, hi), n


def optimizer_config(args) -> OptimizerConfig:
    base = OptimizerConfig()
    s_bounds, grid_s = _bounds_spec(args.grid_s, base.s_bounds, base.grid_s)
    b_bounds, grid_b = _bounds_spec(args.grid_beta, base.beta_bounds, base.grid_beta)
    budget = base.budget if args.budget is None else int(args.budget)
    return OptimizerConfig(s_bounds=s_bounds, beta_bounds=b_bounds, grid_s=grid_s,
                           grid_beta=grid_b, budget=budget)


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def emit(rows: list[dict], columns: list[str], args, config: dict) -> None:
    if args.format == "json":
        text = json.dumps({"config": config, "rows": rows}, indent=2, sort_keys=False) + "\n"
    else:
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(fmt(row[c]) for c in columns) + "\n")
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out") and v is not None}


def _xi(args, default: float) -> float:
    return default if args.xi is None else float(args.xi)


def cmd_witness(args) -> int:
    alpha = _collect(args.alpha)
    if len(alpha) != 1:
        raise ParameterError("witness takes a single --alpha")
    eps = _collect(args.epsilon or ["0"])
    if len(eps) != 1:
        raise ParameterError("witness takes a single --epsilon")
    cat, eps = CatParams(alpha[0], _xi(args, 1.0)), check_epsilon(eps[0])
    beta = float(args.disp or 0.0)
    squeeze = args.squeeze or "0"
    if squeeze == "auto":
        if cat.xi == -1.0 and beta == 0.0 and cat.alpha > 0:
            s = s_opt_analytic(cat.alpha, eps)
        else:
            s = optimize_squeeze(cat, eps, optimizer_config(args), beta).op.s
    else:
        s = float(squeeze)
    report = witness_delta(cat, eps, GaussianOp(s, beta))
    emit([{**report.as_dict()}], WITNESS_COLUMNS, args, _config_echo(args))
    return EXIT_OK


def _row_status(converged: bool, rep) -> str:
    if not converged:
        return "not-converged"
    # both terms below the smallest double: delta = 0 is only the infimum
    if rep.w0 == 0.0 and rep.bound == 0.0:
        return "underflow"
    return "ok"


def _sweep(args, xi: float, optimise) -> int:
    alphas = _collect(args.alpha)
    epsilons = _collect(args.epsilon or ["0.01:0.99:99"])
    for e in epsilons:
        check_epsilon(e)
    rows = []
    for alpha in alphas:
        cat = CatParams(alpha, xi)
        for eps in epsilons:
            res = optimise(cat, eps)
            rep = witness_delta(cat, eps, res.op)
            rows.append({
                "alpha": alpha, "xi": xi, "epsilon": eps, "s_opt": res.op.s, "beta_opt": res.op.beta,
                "w0": rep.w0, "nbar_op": rep.nbar_op, "bound": rep.bound, "delta": rep.delta,
                "status": _row_status(res.converged, rep),
            })
    emit(rows, SWEEP_COLUMNS, args, _config_echo(args))
    return EXIT_OK


def cmd_sweep_odd(args) -> int:
    return _sweep(args, -1.0, lambda cat, eps: optimize_odd(cat.alpha, eps))


def cmd_sweep_even(args) -> int:
    cfg = optimizer_config(args)
    return _sweep(args, 1.0, lambda cat, eps: optimize_displaced_squeezed(cat, eps, cfg))


def cmd_eps_max(args) -> int:
    cfg = optimizer_config(args)
    xi = _xi(args, -1.0)
    strategy = args.strategy or "squeeze"
    if strategy not in STRATEGIES:
        raise ParameterError(f"strategy must be one of {STRATEGIES}")
    rows = []
    for alpha in _collect(args.alpha):
        r = epsilon_max(alpha, xi, strategy, cfg)
        status = "ok" if r.converged else "not-converged"
        if r.saturated:
            status = "saturated"
        rows.append({"alpha": alpha, "xi": xi, "strategy": strategy, "eps_max": r.eps_max,
                     "bracket": r.bracket, "status": status})
    emit(rows, EPS_MAX_COLUMNS, args, _config_echo(args))
    return EXIT_OK


def cmd_wigner_grid(args) -> int:
    alpha = _collect(args.alpha)
    if len(alpha) != 1:
        raise ParameterError("wigner-grid takes a single --alpha")
    cat = CatParams(alpha[0], _xi(args, -1.0))
    eps = _collect(args.epsilon or ["0"])
    if len(eps) != 1:
        raise ParameterError("wigner-grid takes a single --epsilon")
    eps = check_epsilon(eps[0])
    xs = _collect([args.x_range or "-3:3:61"])
    ps = _collect([args.p_range or "-3:3:61"])
    grid = np.asarray(xs)[:, None] + 1j * np.asarray(ps)[None, :]
    w = np.atleast_2d(lossy_cat_wigner(cat, eps, grid))
    rows = [{"x": x, "p": p, "w": float(w[i, j])} for i, x in enumerate(xs) for j, p in enumerate(ps)]
    emit(rows, ["x", "p", "w"], args, _config_echo(args))
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = None if args.tol is None else float(args.tol)
    if tol is not None and not tol > 0:
        raise ParameterError("--tol must be positive")
    cutoff = None if args.cutoff is None else int(args.cutoff)
    results = run_checks(tol=tol, cutoff=cutoff)
    passed = all(r.passed for r in results)
    summary = {"config": _config_echo(args), "passed": passed, "checks": [r.as_dict() for r in results]}
    text = json.dumps(summary, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catqng", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, alpha_required=True):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--alpha", action="append", help="value, list a,b,c or range a:b:n (repeatable)")
        p.add_argument("--xi", type=float)
        p.add_argument("--epsilon", action="append", help="value, list or range a:b:n (repeatable)")
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--grid-s", help="n or lo:hi:n for the s axis")
        p.add_argument("--grid-beta", help="n or lo:hi:n for the beta axis")
        p.add_argument("--budget", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--cutoff", type=int)

    p = sub.add_parser("witness", help="evaluate the witness for one operation")
    common(p)
    p.add_argument("--squeeze", help="squeezing s, or 'auto'")
    p.add_argument("--disp", type=float, help="imaginary-axis displacement beta")
    p.set_defaults(func=cmd_witness)

    for name, func in (("sweep-odd", cmd_sweep_odd), ("sweep-even", cmd_sweep_even)):
        p = sub.add_parser(name, help="optimised witness over an (alpha, epsilon) grid")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("eps-max", help="maximal detectable loss per alpha")
    common(p)
    p.add_argument("--strategy", choices=STRATEGIES)
    p.set_defaults(func=cmd_eps_max)

    p = sub.add_parser("wigner-grid", help="Wigner function on a rectangular grid")
    common(p)
    p.add_argument("--x-range")
    p.add_argument("--p-range")
    p.set_defaults(func=cmd_wigner_grid)

    p = sub.add_parser("verify", help="run the oracle cross-checks")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def read_config_file(path: str) -> list[str]:
    """Turn ``key = value`` lines into flag arguments."""
    argv: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key = value")
            key, value = (t.strip() for t in line.split("=", 1))
            argv += [f"--{key.replace('_', '-')}", value]
    return argv


def _glue_values(argv: list[str]) -> list[str]:
    """Join ``--flag -1:1:5`` into ``--flag=-1:1:5`` so range specs may start with a minus."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and tok not in _SWITCHES and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


_SWITCHES = {"--verbose", "--help"}


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(_glue_values(list(argv)))
    if args.config:
        from_file = parser.parse_args([args.command] + _glue_values(read_config_file(args.config)))
        for key, value in vars(from_file).items():
            if getattr(args, key, None) is None:
                setattr(args, key, value)
    if args.format is None:
        args.format = "csv"
    return args


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except (UsageError, ParameterError, OSError) as exc:
        print(f"catqng: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (fock.CutoffError, QuadratureError, ArithmeticError) as exc:
        print(f"catqng: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
