"""``levelstat`` command line.

Exit codes: 0 success or accept, 1 reject, 2 input or usage error.
CSV files have a header row, ``\\n`` line endings and floats at 17
significant digits.  Without ``--out`` the CSV goes to standard output.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from functools import partial
from pathlib import Path

import numpy as np
from scipy.stats import norm

from . import __version__
from .decomposable import PermutationDistribution, divergences
from .models import KINDS, MCMCConfig, ModelSpec, draw_shape, exp_family_chain
from .parallel import map_replicas, replica_rng
from .plancherel import (
    MATERIALIZE_CAP,
    acceptance_region,
    log_dim_histogram,
    min_h_search,
    plancherel_record,
    sample_shape,
)
from .rsk import rsk, rsk_shape, y_process
from .testing import TEST_KINDS, calibrate_h, h_test, power_study, shape_set_test
from .young import Partition, hook_log_sum, log_factorial, partitions_of

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_INPUT = 2

# reference divergence attached to the (5,3,2,1) report
_DIVERGENCE_REFERENCE = {(11, (5, 3, 2, 1)): 7.5}


class InputError(ValueError):
    """Malformed user input; reported with exit code 2."""


def g17(x: float) -> str:
    return format(float(x), ".17g")


# -- input parsing -----------------------------------------------------------

_TOKEN = re.compile(r"[^\s,;]+")


def read_numbers(path: str) -> list[tuple[int, str]]:
    """(line number, token) for every token of a whitespace/comma separated file."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        out.extend((lineno, tok) for tok in _TOKEN.findall(line))
    if not out:
        raise InputError(f"{path}: no values found")
    return out


def parse_input(path: str) -> tuple[str, np.ndarray]:
    """Classify the file as a permutation of 1..n or a real sample.

    Returns ("permutation", 1-based int array) or ("sample", float array).
    """
    tokens = read_numbers(path)
    values = []
    for lineno, tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a number: {tok!r}") from None
        if not math.isfinite(v):
            raise InputError(f"{path}:{lineno}: non-finite value {tok!r}")
        values.append(v)
    arr = np.array(values)
    n = arr.size
    if all(re.fullmatch(r"[+-]?\d+", tok) for _, tok in tokens):
        ints = arr.astype(np.int64)
        if np.array_equal(np.sort(ints), np.arange(1, n + 1)):
            return "permutation", ints
    return "sample", arr


def stable_ranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="stable")
    r = np.empty(x.size, dtype=np.int64)
    r[order] = np.arange(1, x.size + 1)
    return r


def read_matrix(path: str) -> np.ndarray:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            row = [float(tok) for tok in line.split(",")]
        except ValueError:
            raise InputError(f"{path}:{lineno}: expected comma-separated numbers") from None
        if rows and len(row) != len(rows[0]):
            raise InputError(f"{path}:{lineno}: expected {len(rows[0])} entries, got {len(row)}")
        if not all(math.isfinite(v) for v in row):
            raise InputError(f"{path}:{lineno}: non-finite entry")
        rows.append(row)
    if not rows or len(rows) != len(rows[0]):
        raise InputError(f"{path}: matrix must be square (n lines of n values)")
    return np.array(rows)


# -- output helpers ----------------------------------------------------------


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit(args, name: str, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)
    print(f"wrote {out / name}")


def svg_plot(points, lines=False, width=640, height=400) -> str:
    """Bare scatter (or polyline) of (x, y) points scaled to the canvas."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    pad = 20
    lo = pts.min(axis=0)
    span = np.where(np.ptp(pts, axis=0) > 0, np.ptp(pts, axis=0), 1.0)
    sx = pad + (pts[:, 0] - lo[0]) / span[0] * (width - 2 * pad)
    sy = height - pad - (pts[:, 1] - lo[1]) / span[1] * (height - 2 * pad)
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
    if lines:
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(sx, sy))
        body = f'<polyline fill="none" stroke="black" points="{coords}"/>\n'
    else:
        body = "".join(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2"/>\n' for x, y in zip(sx, sy))
    return head + body + "</svg>\n"


def model_spec(args, n=None, kind=None, rho=None, t=None, matrix=None) -> ModelSpec:
    kind = kind or args.model
    n = n if n is not None else args.n
    matrix = matrix if matrix is not None else getattr(args, "matrix", None)
    a = None
    if kind == "checkerboard":
        if matrix is None:
            raise InputError("checkerboard needs --matrix")
        a = read_matrix(matrix)
        n = a.shape[0] if n is None else n
    if n is None:
        raise InputError("--n is required")
    mcmc = MCMCConfig(getattr(args, "burn_in", None), getattr(args, "thinning", None))
    return ModelSpec(
        kind, n, args.rho if rho is None else rho, args.t if t is None else t, a, mcmc
    )


# -- commands ----------------------------------------------------------------


def cmd_rsk(args) -> int:
    kind, values = parse_input(args.input)
    perm = values if kind == "permutation" else stable_ranks(values)
    pair = rsk(perm)
    lam = pair.shape
    n = lam.n
    h = hook_log_sum(lam)
    lp = 2.0 * h - log_factorial(n)
    kappa = [r + 1 for r in pair.p.word()]
    print(f"input: {kind} of length {n}")
    print(f"shape: {lam}")
    print(f"H: {g17(h)}")
    print(f"LP: {g17(lp)}")
    print("kappa: " + " ".join(map(str, kappa)))
    if args.emit_pq:
        p_rows = y_process(values).rows if kind == "sample" else pair.p.rows
        rows = [("P", k + 1, " ".join(g17(v) if kind == "sample" else str(v) for v in r)) for k, r in enumerate(p_rows)]
        rows += [("Q", k + 1, " ".join(map(str, r))) for k, r in enumerate(pair.q.rows)]
        emit(args, "rsk_pq.csv", csv_text(["tableau", "level", "entries"], rows))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    n = args.n
    if n is None or n < 1:
        raise InputError("--n must be a positive integer")
    if args.histogram:
        hist = log_dim_histogram(n)
        emit(args, f"histogram_n{n}.csv", csv_text(["C", "count"], [(c, str(v)) for c, v in hist.items()]))
        return EXIT_OK
    if n > MATERIALIZE_CAP:
        raise InputError(f"--n {n} is too large to list (limit {MATERIALIZE_CAP})")
    region = acceptance_region(n, args.alpha)
    rows = []
    for lam in partitions_of(n):
        r = plancherel_record(lam)
        rows.append((str(lam), g17(r.prob), g17(r.lp), g17(r.h), g17(r.log_f), int(lam in region)))
    emit(args, f"enumerate_n{n}.csv", csv_text(["shape", "prob", "lp", "h", "log_f", "accepted"], rows))
    if args.out is not None:
        print(f"{len(rows)} shapes, {region.size} accepted, mass {region.mass:.6f}")
    return EXIT_OK


def _simulate_row(spec, rng):
    lam = draw_shape(spec, rng)
    h = hook_log_sum(lam)
    return h, 2.0 * h - log_factorial(lam.n), str(lam)


def cmd_simulate(args) -> int:
    spec = model_spec(args)
    if args.model == "exp_family" and args.chain:
        # one long chain, thinned, instead of independent replicas
        out, _ = exp_family_chain(spec.n, spec.t, args.replicas, spec.mcmc, replica_rng(args.seed, 0, 1))
        results = [_row_from_perm(p) for p in out]
    else:
        results = map_replicas(partial(_simulate_row, spec), args.replicas, args.seed, 1, args.workers)
    rows = [(k, g17(h), g17(lp), s) for k, (h, lp, s) in enumerate(results)]
    emit(args, f"simulate_{spec.kind}_n{spec.n}.csv", csv_text(["replica", "h", "lp", "shape"], rows))
    if args.out is not None:
        hs = np.array([r[0] for r in results])
        sd = hs.std(ddof=1) if len(hs) > 1 else 0.0
        print(f"mean H {hs.mean():.6f}, sd H {sd:.6f} over {len(hs)} replicas")
    return EXIT_OK


def _row_from_perm(perm):
    lam = rsk_shape(perm)
    h = hook_log_sum(lam)
    return h, 2.0 * h - log_factorial(lam.n), str(lam)


def cmd_test(args) -> int:
    kind, values = parse_input(args.input)
    lam = rsk_shape(values)
    n = lam.n
    test = args.test
    if test == "auto":
        test = "shape_set" if n <= MATERIALIZE_CAP else "h_test"
    if test == "shape_set":
        dec = shape_set_test(lam, n, args.alpha)
    else:
        mc = args.mode == "mc"
        cal = calibrate_h(n, args.calibration_replicas, args.seed, args.workers, keep_samples=mc)
        dec = h_test(lam, cal, args.alpha, mode=args.mode)
    print(dec.record())
    print(dec.summary())
    return EXIT_OK if dec.accept else EXIT_REJECT


def _y_rows(n, lo, hi, columns, rng):
    sample = lo + (hi - lo) * rng.random(n)
    rows = []
    for level, row in enumerate(y_process(sample).rows, start=1):
        for t, y in enumerate(row, start=1):
            if columns is None or t in columns:
                rows.append((y, level))
    return rows


def _shape_h(n, rng):
    return hook_log_sum(sample_shape(n, rng))


def cmd_figures(args) -> int:
    fig = args.figure
    n = args.n
    if n is None or n < 1:
        raise InputError("--n must be a positive integer")
    if fig == "y-process":
        lo, hi = args.value_range
        columns = set(args.columns) if args.columns else None
        per = map_replicas(partial(_y_rows, n, lo, hi, columns), args.replicas, args.seed, 1, args.workers)
        rows = [(g17(y), level, n) for block in per for y, level in block]
        emit(args, f"y_process_n{n}.csv", csv_text(["y_value", "level", "n"], rows))
        pts = [(float(y), lv) for y, lv, _ in rows]
        svg = svg_plot(pts)
    elif fig == "h-hist":
        hs = np.array(map_replicas(partial(_shape_h, n), args.replicas, args.seed, 1, args.workers))
        bins = 1 if np.ptp(hs) == 0 else min(args.bins, max(1, len(hs)))
        counts, edges = np.histogram(hs, bins=bins)
        mu = hs.mean()
        sd = hs.std(ddof=1) if len(hs) > 1 else 0.0
        if sd > 0:
            expected = len(hs) * np.diff(norm.cdf(edges, mu, sd))
        else:
            expected = counts.astype(float)
        rows = [(g17(edges[k]), g17(edges[k + 1]), int(counts[k]), g17(expected[k])) for k in range(len(counts))]
        emit(args, f"h_hist_n{n}.csv", csv_text(["bin_lo", "bin_hi", "count", "normal_expected"], rows))
        svg = svg_plot(list(zip(0.5 * (edges[:-1] + edges[1:]), counts)), lines=True)
    elif fig == "min-shape":
        lam, h = min_h_search(n, args.restarts, replica_rng(args.seed, 0, 1))
        rows = [(k, part) for k, part in enumerate(lam, start=1)]
        emit(args, f"min_shape_n{n}.csv", csv_text(["k", "lambda_k"], rows))
        if args.out is not None:
            print(f"H_min = {g17(h)} over {len(lam)} rows")
        svg = svg_plot(rows, lines=True)
    else:  # argparse restricts the choices
        raise InputError(f"unknown figure {fig!r}")
    if args.out is not None:
        (Path(args.out) / f"{fig.replace('-', '_')}_n{n}.svg").write_text(svg)
    return EXIT_OK


def read_grid(path: str, args) -> list[ModelSpec]:
    """Grid file: one model per line, ``kind n [rho=..] [t=..] [matrix=..]``."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    specs = []
    for lineno, line in enumerate(lines, start=1):
        toks = line.split("#", 1)[0].split()
        if not toks:
            continue
        try:
            kind, n = toks[0], int(toks[1])
            opts = dict(tok.split("=", 1) for tok in toks[2:])
            specs.append(
                model_spec(
                    args,
                    n=n,
                    kind=kind,
                    rho=float(opts.get("rho", 0.0)),
                    t=float(opts.get("t", 0.0)),
                    matrix=opts.get("matrix"),
                )
            )
        except (ValueError, IndexError) as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    if not specs:
        raise InputError(f"{path}: no models")
    return specs


def cmd_power(args) -> int:
    grid = read_grid(args.grid, args) if args.grid else [model_spec(args)]
    table = power_study(
        grid,
        test=args.test,
        alpha=args.alpha,
        replicas=args.replicas,
        seed=args.seed,
        workers=args.workers,
        calibration_replicas=args.calibration_replicas,
    )
    emit(args, "power.csv", table.to_csv())
    return EXIT_OK


def cmd_decompose(args) -> int:
    lam = Partition.parse(args.shape)
    n = lam.n if args.n is None else args.n
    if lam.n != n:
        raise InputError(f"shape {lam} has {lam.n} cells, --n is {n}")
    rep = divergences(PermutationDistribution.uniform_on_shape(lam))
    ref = _DIVERGENCE_REFERENCE.get((n, tuple(lam)))
    header = ["n", "shape", "kl_to_uniform", "reference_value", "d_to_uniform", "d_to_proper"]
    row = (n, str(lam), g17(rep.proper_to_uniform), "" if ref is None else g17(ref), g17(rep.d_to_uniform), g17(rep.d_to_proper))
    emit(args, f"decompose_n{n}.csv", csv_text(header, [row]))
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _range(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO,HI") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("need LO < HI")
    return lo, hi


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="master seed (default 0)")
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--out", default=None, help="output directory (default: CSV to stdout)")
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--alpha", type=float, default=0.05)
    common.add_argument("--replicas", type=int, default=100)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", choices=KINDS, default="iid_uniform")
    model.add_argument("--rho", type=float, default=0.0)
    model.add_argument("--t", type=float, default=0.0)
    model.add_argument("--matrix", default=None, help="checkerboard matrix: n lines of n comma-separated floats")
    model.add_argument("--burn-in", type=int, default=None, help="MCMC burn-in sweeps (default 50 n)")
    model.add_argument("--thinning", type=int, default=None, help="MCMC thinning sweeps (default n)")

    p = argparse.ArgumentParser(prog="levelstat", description="RSK level-process statistics and IID tests.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rsk", parents=[common], help="shape, H, LP and levels of one input")
    s.add_argument("input", help="permutation or sample file ('-' for stdin)")
    s.add_argument("--emit-pq", action="store_true", help="write P and Q rows")
    s.set_defaults(func=cmd_rsk)

    s = sub.add_parser("enumerate", parents=[common], help="Plancherel table with acceptance marks")
    s.add_argument("--histogram", action="store_true", help="emit the ln f histogram instead")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("simulate", parents=[common, model], help="per-replica H, LP and shape")
    s.add_argument("--chain", action="store_true", help="exp_family: thin one chain instead of independent chains")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("test", parents=[common], help="IID test of one input; exit 0 accept, 1 reject")
    s.add_argument("input")
    s.add_argument("--test", choices=TEST_KINDS + ("auto",), default="auto")
    s.add_argument("--mode", choices=("normal", "mc"), default="normal", help="h_test reference")
    s.add_argument("--calibration-replicas", type=int, default=1000)
    s.set_defaults(func=cmd_test)

    s = sub.add_parser("figures", parents=[common], help="CSV and SVG for one figure")
    s.add_argument("--figure", choices=("y-process", "h-hist", "min-shape"), required=True)
    s.add_argument("--value-range", type=_range, default=(0.0, 3_000_000.0))
    s.add_argument("--columns", type=_int_list, default=None, help="column indices t to keep (1-based)")
    s.add_argument("--bins", type=int, default=30)
    s.add_argument("--restarts", type=int, default=8)
    s.set_defaults(func=cmd_figures, replicas=None)

    s = sub.add_parser("power", parents=[common, model], help="rejection rates over a model grid")
    s.add_argument("--grid", default=None, help="file with one 'kind n [rho=..] [t=..] [matrix=..]' per line")
    s.add_argument("--test", choices=TEST_KINDS, default="h_test")
    s.add_argument("--calibration-replicas", type=int, default=1000)
    s.set_defaults(func=cmd_power)

    s = sub.add_parser("decompose", parents=[common], help="divergences of a shape-uniform distribution")
    s.add_argument("--shape", required=True, help="e.g. 5,3,2,1")
    s.set_defaults(func=cmd_decompose)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "figures" and args.replicas is None:
        args.replicas = 1
    if args.replicas is not None and args.replicas < 1:
        parser.error("--replicas must be >= 1")
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
