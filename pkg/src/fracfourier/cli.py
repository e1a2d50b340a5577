"""``fracfourier`` command line: eval, alpha, holder, boxdim, table, report.

Every command writes one CSV (or, for ``eval``, optionally an SVG) to
``--out`` or stdout. Identical arguments give byte-identical files whatever
the backend or thread count.

Exit codes: 0 success, 2 bad arguments, 3 resource limits (sieve or table
too short, memory), 4 degenerate data, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from ._backend import set_threads
from .arith import DEFAULT_SIEVE_LIMIT, CoefficientSource, build_sieve
from .boxdim import (
    boxcount_graph,
    boxcount_path,
    check_theorem_inequalities,
    estimate_dimension,
)
from .errors import ArgumentError, FracError, NotAvailableError
from .export import Table, read_config, read_custom_coefficients, svg_polyline, write_text
from .scaling import (
    default_t_grid,
    dyadic_ladder,
    estimate_holder,
    fit_alpha_profile,
    geometric_ladder,
    hypothesis_alpha,
    increment_profile,
    max_profile,
    max_profile_weierstrass,
    theorem_bounds,
    theoretical_exponents,
)
from .series import (
    Assumption,
    Component,
    SeriesSpec,
    WeierstrassSpec,
    evaluate_grid,
    uniform_grid,
    weierstrass_grid,
)

EXIT_IO = 5
COMMANDS = ("eval", "alpha", "holder", "boxdim", "table", "report")
REAL_COMPONENTS = (Component.ABS, Component.RE, Component.IM)
ALL_COMPONENTS = REAL_COMPONENTS + (Component.COMPLEX,)


# --------------------------------------------------------------------------
# argument parsing


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected j0:j1, got {text!r}") from None
    if not 0 <= lo < hi:
        raise argparse.ArgumentTypeError(f"need 0 <= j0 < j1, got {text!r}")
    return lo, hi


def _float_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    return lo, hi


def _int(text: str) -> int:
    # accepts 1e7 style input for large counts
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracfourier",
        description="Fractal Fourier series: evaluation, exponent fits and box dimensions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; command-line flags win")
    common.add_argument(
        "--source",
        default="const",
        help="const[:c], moebius, liouville, random or custom:<path> (default const = 1)",
    )
    common.add_argument("--k", type=int, default=1, help="frequency exponent (n**k)")
    common.add_argument("--p", type=_fraction, default=None, help="weight exponent (default k)")
    common.add_argument("--a", type=float, default=None, help="Weierstrass ratio a")
    common.add_argument("--b", type=int, default=None, help="Weierstrass base b")
    common.add_argument(
        "--alpha", default=None, help="exponent hypothesis: a rational, grh, conj or trivial"
    )
    common.add_argument("--C", type=float, default=1.0, help="constant in |S| <= C x**alpha")
    common.add_argument("--samples", type=_int, default=2**16, help="grid size, power of two")
    common.add_argument("--scales", type=_range, default=(4, 10), help="box levels j0:j1")
    common.add_argument("--h-ladder", type=_range, default=(4, 12), help="h = 2**-j, j0:j1")
    common.add_argument("--x-ladder", type=_float_range, default=(1e2, 1e5), help="x lo:hi")
    common.add_argument("--t-grid", type=_int, default=512, help="uniform t points for alpha")
    common.add_argument("--seed", type=_int, default=0)
    common.add_argument("--sieve-limit", type=_int, default=DEFAULT_SIEVE_LIMIT)
    common.add_argument("--accuracy", type=float, default=1e-2)
    common.add_argument("--slack", type=float, default=0.1, help="tolerance on dimension bounds")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "svg"), default="csv")
    common.add_argument(
        "--plot", choices=("path", "abs", "re", "im"), default="path", help="SVG content"
    )
    common.add_argument("--threads", type=int, default=None, help="worker threads")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "sample the series on a uniform grid",
        "alpha": "fit the exponential-sum growth exponent",
        "holder": "fit the uniform Hoelder exponent",
        "boxdim": "box-counting dimensions of graphs and path",
        "table": "closed-form exponents of the Moebius series",
        "report": "all fits against the implied bounds",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _config_argv(argv: list[str]) -> list[str]:
    """Splice ``--key value`` pairs from a ``--config`` file in right after
    the subcommand, so later command-line flags override them."""
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return argv
    cfg = read_config(path)
    extra = []
    for key, value in cfg.items():
        if key in ("config", "command"):
            continue
        extra += [f"--{key}", value]
    pos = next((i for i, a in enumerate(argv) if a in COMMANDS), None)
    if pos is None:
        command = cfg.get("command")
        if command not in COMMANDS:
            return argv
        return [command] + extra + argv
    return argv[: pos + 1] + extra + argv[pos + 1 :]


# --------------------------------------------------------------------------
# building series from arguments


def build_source(args) -> CoefficientSource:
    name = args.source
    if name == "const" or name.startswith("const:"):
        value = name.split(":", 1)[1] if ":" in name else "1"
        try:
            return CoefficientSource.constant(complex(value.replace(" ", "")))
        except ValueError:
            raise ArgumentError(f"bad constant {value!r}") from None
    if name in ("moebius", "liouville"):
        sieve = build_sieve(args.sieve_limit)
        return getattr(CoefficientSource, name)(sieve)
    if name == "random":
        return CoefficientSource.random_signs(args.seed)
    if name.startswith("custom:"):
        return CoefficientSource.custom(read_custom_coefficients(name[len("custom:") :]))
    raise ArgumentError(f"unknown source {name!r}")


def _hypothesis(args, k: int):
    if args.alpha is None:
        return None, Assumption.USER_SUPPLIED
    text = args.alpha.strip().lower()
    named = {"grh": Assumption.GRH, "conj": Assumption.SQUARE_ROOT, "trivial": Assumption.UNCONDITIONAL}
    if text in named:
        return hypothesis_alpha(k, named[text]), named[text]
    try:
        return Fraction(text), Assumption.USER_SUPPLIED
    except (ValueError, ZeroDivisionError):
        raise ArgumentError(f"--alpha must be a rational, grh, conj or trivial: {args.alpha!r}") from None


def build_series(args) -> SeriesSpec | WeierstrassSpec:
    source = build_source(args)
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None:
            raise ArgumentError("a Weierstrass series needs both --a and --b")
        if args.alpha is not None:
            raise ArgumentError("--alpha is implied by --a and --b for Weierstrass series")
        return WeierstrassSpec(args.a, args.b, source)
    p = Fraction(args.k) if args.p is None else args.p
    alpha, assumption = _hypothesis(args, args.k)
    return SeriesSpec(source, k=args.k, p=p, alpha=alpha, C=args.C, assumption=assumption)


def _check_samples(n: int) -> None:
    if n < 2**8 or n & (n - 1):
        raise ArgumentError(f"--samples must be a power of two >= 256, got {n}")


def sample(series, args):
    _check_samples(args.samples)
    t = uniform_grid(args.samples)
    if isinstance(series, WeierstrassSpec):
        return weierstrass_grid(series, t)
    return evaluate_grid(series, t, args.accuracy)


def _series_meta(series, grid=None) -> dict:
    meta = {"series": series.describe()}
    if isinstance(series, SeriesSpec):
        meta.update(k=series.k, p=series.p, alpha=series.alpha, C=series.C)
        meta["assumption"] = series.assumption.value if series.alpha is not None else None
    else:
        meta.update(a=series.a, b=series.b)
    if grid is not None:
        meta.update(samples=len(grid), N_used=grid.N_used, tail_bound=grid.tail_bound)
    return meta


def _clean(msg: str) -> str:
    return " ".join(str(msg).replace(",", ";").split())


def _exact(x):
    """Fractions with modest denominators print exactly, others as decimals."""
    if x is None:
        return None
    x = Fraction(x)
    return x if x.denominator <= 10**6 else float(x)


# --------------------------------------------------------------------------
# commands


def cmd_eval(args) -> str:
    series = build_series(args)
    grid = sample(series, args)
    z = grid.values
    if args.format == "svg":
        if args.plot == "path":
            x, y = z.real, z.imag
        else:
            x, y = grid.t_values, grid.component(args.plot)
        return svg_polyline(x, y, title=f"{series.describe()} {args.plot}")
    meta = {"command": "eval", **_series_meta(series, grid), "accuracy": args.accuracy}
    table = Table(["t", "re", "im", "abs"], meta=meta)
    absz = np.abs(z)
    table.rows = [
        [float(t), float(r), float(i), float(a)]
        for t, r, i, a in zip(grid.t_values, z.real, z.imag, absz)
    ]
    return table.to_csv()


def _x_ladder(args) -> np.ndarray:
    lo, hi = args.x_ladder
    return geometric_ladder(lo, hi)


def _alpha_profile(series, args):
    x = _x_ladder(args)
    t = default_t_grid(args.t_grid)
    if isinstance(series, WeierstrassSpec):
        return x, max_profile_weierstrass(series, x, t)
    return x, max_profile(series.source, series.k, x, t)


def cmd_alpha(args) -> str:
    series = build_series(args)
    x, m = _alpha_profile(series, args)
    fit = fit_alpha_profile(x, m)
    meta = {"command": "alpha", **_series_meta(series), "t_points": len(default_t_grid(args.t_grid))}
    meta.update(alpha_hat=fit.slope, rms_residual=fit.rms_residual, fit_points=fit.n_points)
    return Table(["x", "max_abs_S"], [[float(a), float(b)] for a, b in zip(x, m)], meta).to_csv()


def _fits(estimate, keys):
    """Run ``estimate(key)`` for each key; failures become status strings."""
    out = {}
    for key in keys:
        try:
            out[key] = (estimate(key), "ok")
        except FracError as exc:
            out[key] = (None, f"{type(exc).__name__}: {_clean(exc)}")
    return out


def cmd_holder(args) -> str:
    series = build_series(args)
    grid = sample(series, args)
    h = dyadic_ladder(*args.h_ladder)
    profiles = {c: increment_profile(grid, h, c) for c in ALL_COMPONENTS}
    fits = _fits(lambda c: estimate_holder(grid, h, c), ALL_COMPONENTS)
    meta = {"command": "holder", **_series_meta(series, grid)}
    for c, (fit, status) in fits.items():
        meta[f"eta_hat_{c.value}"] = None if fit is None else fit.slope
        meta[f"rms_{c.value}"] = None if fit is None else fit.rms_residual
        meta[f"status_{c.value}"] = status
    table = Table(["h"] + [f"D_{c.value}" for c in ALL_COMPONENTS], meta=meta)
    table.rows = [
        [float(h[i])] + [float(profiles[c][i]) for c in ALL_COMPONENTS] for i in range(len(h))
    ]
    return table.to_csv()


def _curves(grid, levels):
    curves = {}
    for c in REAL_COMPONENTS:
        curves[c.value] = boxcount_graph(grid, c, levels)
    curves["path"] = boxcount_path(grid, levels)
    return curves


def cmd_boxdim(args) -> str:
    series = build_series(args)
    grid = sample(series, args)
    levels = list(range(args.scales[0], args.scales[1] + 1))
    curves = _curves(grid, levels)
    fits = _fits(lambda key: estimate_dimension(curves[key]), list(curves))
    meta = {"command": "boxdim", **_series_meta(series, grid)}
    for key, (fit, status) in fits.items():
        meta[f"dim_{key}"] = None if fit is None else fit.slope
        meta[f"rms_{key}"] = None if fit is None else fit.rms_residual
        meta[f"status_{key}"] = status
    meta["path_lower_bound"] = curves["path"].lower_bound
    header = ["j", "r", "graph_abs", "graph_re", "graph_im", "path", "path_shifted"]
    table = Table(header, meta=meta)
    path = curves["path"]
    for i, j in enumerate(levels):
        table.rows.append(
            [j, 2.0**-j]
            + [int(curves[c.value].counts[i]) for c in REAL_COMPONENTS]
            + [int(path.counts[i]), int(path.shifted_counts[i])]
        )
    return table.to_csv()


TABLE_ASSUMPTIONS = (Assumption.UNCONDITIONAL, Assumption.GRH, Assumption.SQUARE_ROOT)


def exponent_table(ks=range(1, 5)) -> Table:
    header = ["assumption", "k", "eta", "eta_decimal", "alpha", "dim_graph_bound", "epsilon_limit"]
    table = Table(header, meta={"command": "table", "series": "F[k=p](moebius)"})
    for assumption in TABLE_ASSUMPTIONS:
        for k in ks:
            try:
                row = theoretical_exponents(k, assumption)
            except NotAvailableError:
                table.rows.append([assumption.value, k, "—", None, None, None, None])
                continue
            table.rows.append(
                [
                    assumption.value,
                    k,
                    row.eta,
                    float(row.eta),
                    row.alpha,
                    row.dim_graph_bound,
                    row.epsilon_limit,
                ]
            )
    return table


def cmd_table(args) -> str:
    return exponent_table().to_csv()


REPORT_HEADER = [
    "series",
    "component",
    "alpha_hat",
    "alpha_rms",
    "eta_hat",
    "eta_rms",
    "dim_hat",
    "dim_rms",
    "alpha",
    "eta_theory",
    "dim_graph_bound",
    "dim_path_bound",
    "bound",
    "margin",
    "check",
    "status",
]


def build_report(series, args) -> Table:
    grid = sample(series, args)
    h = dyadic_ladder(*args.h_ladder)
    levels = list(range(args.scales[0], args.scales[1] + 1))

    try:
        x, m = _alpha_profile(series, args)
        alpha_fit, alpha_status = fit_alpha_profile(x, m), "ok"
    except FracError as exc:
        alpha_fit, alpha_status = None, f"alpha {type(exc).__name__}: {_clean(exc)}"

    eta_fits = _fits(lambda c: estimate_holder(grid, h, c), ALL_COMPONENTS)

    lower_bound = []

    def dim_fit(c):
        if c is Component.COMPLEX:
            curve = boxcount_path(grid, levels)
            if curve.lower_bound:
                lower_bound.append("path counts are a lower bound (sample gaps >= r/2)")
            return estimate_dimension(curve)
        return estimate_dimension(boxcount_graph(grid, c, levels))

    dim_fits = _fits(dim_fit, ALL_COMPONENTS)

    report = None
    theory_status = "ok"
    if series.alpha is None:
        theory_status = "no hypothesis"
    else:
        try:
            report = theorem_bounds(series)
        except FracError as exc:
            theory_status = f"theory {type(exc).__name__}: {_clean(exc)}"

    meta = {"command": "report", **_series_meta(series, grid), "slack": args.slack}
    table = Table(REPORT_HEADER, meta=meta)
    for c in ALL_COMPONENTS:
        eta_fit, eta_status = eta_fits[c]
        d_fit, d_status = dim_fits[c]
        bound = margin = check = None
        if report is not None and d_fit is not None:
            if c is Component.COMPLEX:
                result = check_theorem_inequalities(report, None, d_fit, args.slack)
                bound, margin, ok = report.dim_path_bound, result.path_margin, result.path_pass
            else:
                result = check_theorem_inequalities(report, d_fit, None, args.slack)
                bound, margin, ok = report.dim_graph_bound, result.graph_margin, result.graph_pass
            check = "pass" if ok else "fail"
        statuses = [s for s in (alpha_status, eta_status, d_status, theory_status) if s != "ok"]
        if c is Component.COMPLEX:
            statuses += lower_bound
        table.rows.append(
            [
                series.describe(),
                "path" if c is Component.COMPLEX else c.value,
                None if alpha_fit is None else alpha_fit.slope,
                None if alpha_fit is None else alpha_fit.rms_residual,
                None if eta_fit is None else eta_fit.slope,
                None if eta_fit is None else eta_fit.rms_residual,
                None if d_fit is None else d_fit.slope,
                None if d_fit is None else d_fit.rms_residual,
                None if report is None else _exact(report.alpha),
                None if report is None else _exact(report.eta_theory),
                None if report is None else _exact(report.dim_graph_bound),
                None if report is None else _exact(report.dim_path_bound),
                _exact(bound),
                margin,
                check,
                "ok" if not statuses else "; ".join(statuses),
            ]
        )
    return table


def cmd_report(args) -> str:
    return build_report(build_series(args), args).to_csv()


HANDLERS = {
    "eval": cmd_eval,
    "alpha": cmd_alpha,
    "holder": cmd_holder,
    "boxdim": cmd_boxdim,
    "table": cmd_table,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _config_argv(argv)
    except FracError as exc:
        print(f"fracfourier: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"fracfourier: error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format == "svg" and args.command != "eval":
        print("fracfourier: error: --format svg is only available for eval", file=sys.stderr)
        return 2
    try:
        if args.threads is not None:
            set_threads(args.threads)
        text = HANDLERS[args.command](args)
        write_text(text, args.out)
    except FracError as exc:
        print(f"fracfourier: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except MemoryError:
        print("fracfourier: error: out of memory", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"fracfourier: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
