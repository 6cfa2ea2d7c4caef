"""Command-line interface: compress, decompress, analyze, experiment."""

from __future__ import annotations

import argparse
import csv
import os
import struct
import sys
from pathlib import Path

import numpy as np

from . import analysis, codec, experiments, metrics, pnm, rotations, svd
from .errors import BadMagic, EsvdError, InvariantViolation, Malformed

MATRIX_MAGIC = b"EMAT"
_MATRIX_HEADER = struct.Struct("<4sQQ")

FMT_CSV = "csv"
FMT_BINARY = "matrix-binary"
FMT_PNM = "pnm"


# --- matrix file formats -------------------------------------------------

def read_matrix_file(path, fmt: str) -> np.ndarray:
    data = Path(path).read_bytes()
    if fmt == FMT_CSV:
        rows = [
            [float(tok) for tok in line.split(",")]
            for line in data.decode().splitlines()
            if line.strip()
        ]
        if not rows or len({len(r) for r in rows}) != 1:
            raise Malformed(f"{path}: empty or ragged CSV matrix")
        return np.asarray(rows, dtype=np.float64)
    if fmt == FMT_BINARY:
        if len(data) < _MATRIX_HEADER.size:
            raise Malformed(f"{path}: shorter than matrix header")
        magic, m, n = _MATRIX_HEADER.unpack_from(data)
        if magic != MATRIX_MAGIC:
            raise BadMagic(f"{path}: expected {MATRIX_MAGIC!r}")
        expected = _MATRIX_HEADER.size + 8 * m * n
        if len(data) != expected:
            raise Malformed(f"{path}: {len(data)} bytes, expected {expected}")
        return (
            np.frombuffer(data, dtype="<f8", offset=_MATRIX_HEADER.size)
            .reshape(m, n)
            .copy()
        )
    raise Malformed(f"unknown matrix format {fmt!r}")


def write_matrix_file(path, x: np.ndarray, fmt: str) -> None:
    if fmt == FMT_CSV:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in x:
                writer.writerow([repr(float(v)) for v in row])
    elif fmt == FMT_BINARY:
        m, n = x.shape
        payload = _MATRIX_HEADER.pack(MATRIX_MAGIC, m, n)
        Path(path).write_bytes(payload + x.astype("<f8").tobytes())
    else:
        raise Malformed(f"unknown matrix format {fmt!r}")


def _sniff_input_format(path, forced: str | None) -> str:
    if forced:
        return forced
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return FMT_CSV
    if suffix in (".pgm", ".ppm", ".pnm"):
        return FMT_PNM
    if suffix in (".bin", ".emat"):
        return FMT_BINARY
    head = Path(path).open("rb").read(4)
    if head[:2] in (b"P5", b"P6"):
        return FMT_PNM
    if head == MATRIX_MAGIC:
        return FMT_BINARY
    return FMT_CSV


# --- subcommands ----------------------------------------------------------

def _cmd_compress(args) -> int:
    fmt = _sniff_input_format(args.input, args.format)
    out = args.output or (str(args.input) + ".esvd")

    if fmt == FMT_PNM:
        img = pnm.read_pnm(Path(args.input).read_bytes())
        m, n = img.height, img.width
        l = _choose_rank(args, m, n)
        channels = [
            codec.compress(plane, l, args.ortho_tol) for plane in img.planes
        ]
        Path(out).write_bytes(codec.encode_image(channels))
        x = np.concatenate(img.planes)
        x_hat = np.concatenate([codec.decompress(c) for c in channels])
        for plane, c in zip(img.planes, channels):
            _check_lossless(plane, c, args.recon_tol)
    else:
        x = read_matrix_file(args.input, fmt)
        m, n = x.shape
        l = _choose_rank(args, m, n)
        flags = codec.FLAG_SOURCE_CSV if fmt == FMT_CSV else 0
        c = codec.compress(x, l, args.ortho_tol, flags=flags)
        Path(out).write_bytes(codec.encode(c))
        x_hat = codec.decompress(c)
        _check_lossless(x, c, args.recon_tol)

    rep = analysis.storage_report(m, n, l)
    pair = metrics.metric_pair(x, x_hat)
    print(
        ",".join(
            str(v)
            for v in (m, n, l, rep.sr_svd, rep.sr_esvd, rep.sr_hat, pair.mae, pair.rho)
        )
    )
    return 0


def _check_lossless(x, c, recon_tol: float) -> None:
    # Post-condition: the angle round trip reproduces the rank-l SVD
    # reconstruction of the source within the tolerance.
    reference = svd.reconstruct(svd.truncated_svd(x, c.l))
    err = metrics.mae(reference, codec.decompress(c))
    if err > recon_tol:
        raise InvariantViolation(
            f"round-trip MAE {err:.3e} exceeds tolerance {recon_tol:.3e}"
        )


def _choose_rank(args, m: int, n: int) -> int:
    if args.budget is not None:
        return analysis.budget_report(args.budget, m, n).l_esvd_max
    return args.rank


def _cmd_decompress(args) -> int:
    data = Path(args.input).read_bytes()
    if data[:1] in (b"\x01", b"\x03"):
        channels = codec.decode_image(data)
        planes = tuple(
            pnm.quantize_plane(codec.decompress(c)) for c in channels
        )
        height, width = channels[0].m, channels[0].n
        img = pnm.ImagePlanes(
            width=width, height=height, channels=len(channels), planes=planes
        )
        out = args.output or (str(args.input) + (".pgm" if len(channels) == 1 else ".ppm"))
        Path(out).write_bytes(pnm.write_pnm(img))
    else:
        c = codec.decode(data)
        x = codec.decompress(c)
        fmt = args.format or (
            FMT_CSV if c.flags & codec.FLAG_SOURCE_CSV else FMT_BINARY
        )
        out = args.output or (
            str(args.input) + (".csv" if fmt == FMT_CSV else ".bin")
        )
        write_matrix_file(out, x, fmt)
    return 0


def _cmd_analyze(args) -> int:
    writer = csv.writer(sys.stdout)
    if args.at_l0:
        l0 = analysis.svd_failure_rank(args.m, args.n)
        rep = analysis.storage_report(args.m, args.n, l0)
        writer.writerow(["l0", "sr_hat"])
        writer.writerow([l0, rep.sr_hat])
    elif args.budget_sweep:
        start, stop, step = args.budget_sweep
        writer.writerow(["M", "l_svd_max", "l_esvd_max"])
        writer.writerows(
            analysis.budget_curve_rows(args.m, args.n, range(start, stop + 1, step))
        )
    else:
        writer.writerow(["l", "sr_svd", "sr_esvd", "sr_hat"])
        writer.writerows(analysis.sr_curve_rows(args.m, args.n))
    return 0


def _cmd_experiment(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.name == "lossless":
        planes = None
        if args.images:
            planes = []
            for image_path in args.images:
                img = pnm.read_pnm(Path(image_path).read_bytes())
                planes.extend(img.planes)
        rows = experiments.run_lossless_trial(
            args.count, args.size, args.ranks, seed=args.seed, planes=planes
        )
        experiments.write_lossless_csv(out_dir / "lossless_table.csv", rows)
    else:
        cfg = experiments.SimulationConfig(
            m=args.m,
            n=args.n,
            budget_start=args.budget_start,
            budget_stop=args.budget_stop,
            budget_step=args.budget_step,
            repetitions=args.reps,
            seed=args.seed,
        )
        rows = experiments.run_simulation(cfg)
        experiments.write_simulation_csv(out_dir / "simulation_table.csv", rows)
        if args.scatter_budget is not None:
            points = experiments.scatter_points(cfg, args.scatter_budget)
            with open(out_dir / "scatter.csv", "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["x", "x_hat_svd", "x_hat_esvd"])
                writer.writerows(points)
    return 0


# --- parser ---------------------------------------------------------------

def _default_seed() -> int:
    env = os.environ.get("ESVD_SEED")
    return int(env) if env else experiments.DEFAULT_SEED


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esvd",
        description="Lossless rotation-angle re-encoding of truncated SVD factors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a matrix or PGM/PPM image")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rank", type=_positive_int, help="retained rank l")
    group.add_argument(
        "--budget", type=_positive_int, help="storage-unit budget M; picks maximal l"
    )
    p.add_argument("--format", choices=[FMT_CSV, FMT_BINARY, FMT_PNM])
    p.add_argument("--ortho-tol", type=float, default=rotations.ORTHO_TOL)
    p.add_argument("--recon-tol", type=float, default=rotations.RECON_TOL)
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("decompress", help="reconstruct from an .esvd container")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=[FMT_CSV, FMT_BINARY])
    p.set_defaults(func=_cmd_decompress)

    p = sub.add_parser("analyze", help="storage-ratio and budget reports")
    p.add_argument("m", type=_positive_int)
    p.add_argument("n", type=_positive_int)
    p.add_argument("--at-l0", action="store_true", help="report the SVD failure rank")
    p.add_argument(
        "--budget-sweep",
        nargs=3,
        type=_positive_int,
        metavar=("START", "STOP", "STEP"),
    )
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("experiment", help="run a reproduction and write CSVs")
    p.add_argument("name", choices=["lossless", "simulation"])
    p.add_argument("--out-dir", default=".")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--count", type=_positive_int, default=25)
    p.add_argument("--size", type=_positive_int, default=375)
    p.add_argument(
        "--ranks",
        type=_positive_int,
        nargs="+",
        default=[50, 100, 150, 200, 250, 300],
    )
    p.add_argument("--images", nargs="+", help="PGM/PPM planes for the lossless trial")
    p.add_argument("--m", type=_positive_int, default=100)
    p.add_argument("--n", type=_positive_int, default=150)
    p.add_argument("--reps", type=_positive_int, default=50)
    p.add_argument("--budget-start", type=_positive_int, default=1000)
    p.add_argument("--budget-stop", type=_positive_int, default=15000)
    p.add_argument("--budget-step", type=_positive_int, default=500)
    p.add_argument("--scatter-budget", type=_positive_int)
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EsvdError as exc:
        print(f"ESVD-ERROR {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ESVD-ERROR IOError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
