"""Command-line front end: ``lattice-llt <subcommand> [options]``.

Every subcommand writes one table (CSV by default, JSON with ``--format json``)
preceded by the echoed run configuration. Exit codes: 0 success, 2 validation
or domain error (the error class name is printed on stderr), 1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

from . import __version__
from .asllt import default_checkpoints, expected_average_curve, run_ensemble
from .bernoulli import TauSequence, build_part, canonical_tau, reconstructed_law
from .convolve import DEFAULT_CAP, convolve_n, lattice_offset
from .correlation import bound_scan, decade_grid, pow2_grid, stats_and_sequence
from .errors import LatticeError
from .lattice import LatticePmf, load_pmf, normalize_span, pmf_from_json, validate
from .llt import bernoulli_llt_error, llt_error
from .tail_bounds import chernoff_params, psi, verify_chernoff

EXACT_AVERAGE_LIMIT = 10**4


class Report:
    def __init__(self, columns, rows=(), summary=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.summary = dict(summary or {})


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def render(report: Report, config: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "artifact": "lattice_llt",
            "version": __version__,
            "config": config,
            "columns": report.columns,
            "rows": [[_jsonable(v) for v in r] for r in report.rows],
            "summary": {k: _jsonable(v) for k, v in report.summary.items()},
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# lattice_llt {__version__}\n")
    buf.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for r in report.rows:
        writer.writerow([_fmt(v) for v in r])
    for k, v in report.summary.items():
        buf.write(f"# {k},{_fmt(v)}\n")
    return buf.getvalue()


def parse_count(text: str) -> int:
    """Integers written plainly, as ``10^9`` or as ``1e9``."""
    text = text.strip()
    m = re.fullmatch(r"(\d+)\^(\d+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    try:
        return int(text)
    except ValueError:
        val = float(text)
        if val != int(val):
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
        return int(val)


def parse_counts(text: str) -> list[int]:
    return [parse_count(t) for t in text.split(",") if t.strip()]


def read_pmf(source: str | None) -> LatticePmf:
    if source is None:
        raise ValueError("--pmf is required for this subcommand")
    if source.lstrip().startswith("{"):
        return pmf_from_json(json.loads(source))
    return load_pmf(source)


def cmd_pmf(args) -> Report:
    pmf = read_pmf(args.pmf)
    try:
        stats = validate(pmf)
    except LatticeError as exc:
        if exc.code == "NonMaximalSpan":
            norm = normalize_span(pmf)
            exc.args = (f"{exc.args[0]}; normalized law: {json.dumps(norm.to_json(), sort_keys=True)}",)
        raise
    return Report(
        ["key", "value"],
        [
            ["mu", stats.mu],
            ["sigma2", stats.sigma2],
            ["vartheta", stats.vartheta],
            ["basber", stats.basber],
            ["v0", pmf.v0],
            ["D", pmf.D],
            ["atoms", len(pmf.probs)],
            ["span", "maximal"],
        ],
    )


def cmd_convolve(args) -> Report:
    pmf = read_pmf(args.pmf)
    validate(pmf)
    dist = convolve_n(pmf, args.n, strategy=args.strategy, cap=args.cap)
    if args.at is not None:
        k = lattice_offset(args.at, args.n, pmf.v0, pmf.D)
        p = 0.0 if k is None else dist.at_offset(k)
        return Report(["value", "prob"], [[args.at, p]], {"on_lattice": k is not None})
    rows = [[float(v), int(k), float(p)] for v, k, p in zip(dist.values, dist.offsets, dist.probs)]
    return Report(["value", "offset", "prob"], rows, {"mass": math.fsum(dist.probs)})


def cmd_bpart(args) -> Report:
    pmf = read_pmf(args.pmf)
    validate(pmf)
    if args.tau:
        raw = {int(k): float(v) for k, v in json.loads(args.tau).items()}
        tau = TauSequence(raw, math.fsum(raw.values()))
    else:
        tau = canonical_tau(pmf)
    part = build_part(pmf, tau)
    back = reconstructed_law(part)
    residual = max(abs(back.f(k) - pmf.f(k)) for k in set(back.probs) | set(pmf.probs))
    rows = [[k, pmf.value(k), e, p] for k, e, p in part.ordered_atoms()]
    return Report(
        ["offset", "value", "eps", "prob"],
        rows,
        {"vartheta": part.vartheta, "p_eps1": part.eps_one(), "reconstruction_residual": residual},
    )


def cmd_chernoff(args) -> Report:
    if args.theta is not None:
        theta, rho = args.theta, psi(args.theta, args.vartheta)
    else:
        cp = chernoff_params(args.vartheta, args.rho)
        theta, rho = cp.theta, cp.rho
    rows = []
    for n in args.n:
        chk = verify_chernoff(args.vartheta, theta, n)
        rows.append([n, chk.exact, chk.bound, chk.holds])
    return Report(["n", "exact", "bound", "holds"], rows, {"theta": theta, "rho": rho})


def cmd_llt(args) -> Report:
    if args.coin:
        rows = [[n, *bernoulli_llt_error(n)] for n in args.ns]
        return Report(["n", "sup", "n_sup"], rows)
    pmf = read_pmf(args.pmf)
    curve = llt_error(pmf, args.ns, cap=args.cap)
    return Report(
        ["n", "delta_n"],
        curve.rows(),
        {"alpha_hat": curve.alpha_hat, "alpha_se": curve.alpha_se},
    )


def cmd_corr(args) -> Report:
    pmf = read_pmf(args.pmf)
    _, seq = stats_and_sequence(pmf, args.kappa, args.shift)
    grid = pow2_grid(args.nmin, args.nmax) if args.grid == "pow2" else decade_grid(args.nmax)
    scan = bound_scan(pmf, seq, grid, c=args.c, alpha=args.alpha, cap=args.cap)
    rows = [[r.n, r.m, r.exact_cov, r.thm1_bound_shape, r.cor1_shape, r.ratio] for r in scan.records]
    return Report(
        ["n", "m", "exact_cov", "thm1_shape", "cor1_shape", "ratio"],
        rows,
        {"C_hat": scan.C_hat, "C_c_hat": scan.C_c_hat, "C_gw_hat": scan.C_gw_hat},
    )


def cmd_asllt(args) -> Report:
    pmf = read_pmf(args.pmf)
    _, seq = stats_and_sequence(pmf, args.kappa, args.shift)
    cps = args.checkpoints or default_checkpoints(args.nmax)
    ens = run_ensemble(pmf, seq, args.nmax, cps, args.paths, args.seed, threads=args.threads)
    columns = ["N", "mean", "std", "stderr", "min", "max"]
    rows = [list(r) for r in zip(ens.checkpoints, ens.mean, ens.std, ens.stderr, ens.min, ens.max)]
    if args.expected:
        small = [N for N in ens.checkpoints if N <= EXACT_AVERAGE_LIMIT]
        exact = dict(zip(small, expected_average_curve(pmf, seq, small, args.cap))) if small else {}
        columns.append("expected")
        for r in rows:
            r.append(exact.get(r[0], ""))
    return Report(columns, rows, {"limit": ens.limit})


COMMANDS = {
    "pmf": cmd_pmf,
    "convolve": cmd_convolve,
    "bpart": cmd_bpart,
    "chernoff": cmd_chernoff,
    "llt": cmd_llt,
    "corr": cmd_corr,
    "asllt": cmd_asllt,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pmf", help="PMF JSON file, or an inline JSON object")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cap", type=parse_count, default=DEFAULT_CAP, help="max lattice points per distribution")

    parser = argparse.ArgumentParser(prog="lattice-llt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lattice_llt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("pmf", parents=[common], help="validate a PMF and print its statistics")

    p = sub.add_parser("convolve", parents=[common], help="exact law of S_n")
    p.add_argument("--n", type=parse_count, required=True)
    p.add_argument("--at", type=float, help="report only P{S_n = AT}")
    p.add_argument("--strategy", choices=["binary", "direct"], default="binary")

    p = sub.add_parser("bpart", parents=[common], help="Bernoulli-part joint law of (V, eps)")
    p.add_argument("--tau", help='JSON map offset -> tau_k, e.g. \'{"0": 0.3}\' (default: canonical)')

    p = sub.add_parser("chernoff", parents=[common], help="binomial lower tail vs psi(theta)^n")
    p.add_argument("--vartheta", type=float, required=True)
    p.add_argument("--theta", type=float)
    p.add_argument("--rho", type=float, help="solve psi(theta) = rho (default 1 - vartheta/2)")
    p.add_argument("--n", type=parse_counts, default=[1, 10, 100])

    p = sub.add_parser("llt", parents=[common], help="sup-norm LLT error curve")
    p.add_argument("--ns", type=parse_counts, default=[100, 1000, 10000])
    p.add_argument("--coin", action="store_true", help="fair-coin sums (no --pmf needed)")

    for name, helptext in (("corr", "exact E[Y_n Y_m] against the bound shapes"), ("asllt", "ASLLT ensemble")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--kappa", type=float, default=0.0)
        p.add_argument("--shift", type=float, default=0.0, help="fraction of D added to every target")

    p = sub.choices["corr"]
    p.add_argument("--grid", choices=["decade", "pow2"], default="decade")
    p.add_argument("--nmin", type=parse_count, default=64)
    p.add_argument("--nmax", type=parse_count, default=None)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=0.5)

    p = sub.choices["asllt"]
    p.add_argument("--paths", type=int, default=20)
    p.add_argument("--nmax", type=parse_count, default=10**5)
    p.add_argument("--checkpoints", type=parse_counts)
    p.add_argument("--expected", action="store_true", help=f"add exact E[A_N] for N <= {EXACT_AVERAGE_LIMIT}")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "corr" and args.nmax is None:
        args.nmax = 4096 if args.grid == "pow2" else 1000
    config = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    try:
        report = COMMANDS[args.command](args)
    except LatticeError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"error: unexpected {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(report, config, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
