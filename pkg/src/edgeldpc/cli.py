"""Command line front end: table inspection, decoding, BER sweeps, benchmarks.

Exit status contract: 0 success, 1 decode failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from .channel import ber_csv, ber_sweep, ebno_to_sigma2, transmit_all_zero
from .codes import CodeInfo, generate_gallager_code, load_code, serialize_alist
from .engine import ParallelDecoder
from .rng import derive_state
from .serial import decode_awgn
from .tables import CodeTables

EXIT_OK = 0
EXIT_DECODE_FAILED = 1
EXIT_USAGE = 2


def _add_common(p: argparse.ArgumentParser, code_required=True):
    p.add_argument("--code", required=code_required, help="path to the parity-check matrix file")
    p.add_argument("--format", choices=["alist", "dense"], default="alist", help="code file format")


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--max-iter", type=int, default=50, help="maximum decoding iterations")
    p.add_argument("--seed", type=int, default=0, help="base seed for all pseudo-randomness")
    p.add_argument("--group-size", type=int, default=512, help="synchronized logical workers")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="physical threads per decoder")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="edgeldpc", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="print the address-iterator tables of a code")
    _add_common(p)

    p = sub.add_parser("decode", help="decode one observation vector")
    _add_common(p)
    _add_run_flags(p)
    p.add_argument("obs", help="observations, one float per line")
    p.add_argument("--sigma2", type=float, default=None, help="channel noise variance")
    p.add_argument("--ebno", default=None, help="Eb/N0 in dB (alternative to --sigma2)")
    p.add_argument("--serial", action="store_true", help="use the serial reference decoder")

    p = sub.add_parser("ber", help="run a bit error rate sweep")
    _add_common(p)
    _add_run_flags(p)
    p.add_argument("--ebno", required=True, help="comma-separated Eb/N0 list in dB, e.g. 0,1,2,3,4")
    p.add_argument("--frames", type=int, default=1000, help="frames per point")
    p.add_argument("--decoders", type=int, default=100, help="decoders in flight")
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")

    p = sub.add_parser("bench", help="time the serial reference against the parallel engine")
    _add_common(p)
    _add_run_flags(p)
    p.add_argument("--ebno", default="2", help="operating point in dB")
    p.add_argument("--frames", type=int, default=100, help="frames to decode")

    p = sub.add_parser("gen", help="generate a regular pseudo-random code (alist output)")
    p.add_argument("--n", type=int, required=True, help="block length")
    p.add_argument("--wc", type=int, required=True, help="column weight")
    p.add_argument("--wr", type=int, required=True, help="row weight")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default: stdout)")

    return ap


def _format_row(label, values):
    return f"{label} | " + " ".join(str(int(x)) for x in values)


def cmd_tables(args) -> int:
    H = load_code(args.code, args.format)
    tables = CodeTables.from_matrix(H)
    info = CodeInfo.from_matrix(H)
    print(f"code: n={info.var_nodes} m={info.check_nodes} edges={info.total_edges}")
    for title, tb in (
        ("addresses for messages out of variable nodes", tables.variable),
        ("addresses for messages out of check nodes", tables.check),
    ):
        print()
        print(title)
        for label in "evctsu":
            print(_format_row(label, getattr(tb, label)))
    return EXIT_OK


def _sigma2_from_args(args, H) -> float:
    if args.sigma2 is not None:
        return args.sigma2
    if args.ebno is not None:
        return ebno_to_sigma2(float(args.ebno), (H.n - H.m) / H.n)
    raise ValueError("decode needs --sigma2 or --ebno")


def cmd_decode(args) -> int:
    H = load_code(args.code, args.format)
    tables = CodeTables.from_matrix(H)
    with open(args.obs, "r", encoding="ascii") as fh:
        y = np.array([float(line) for line in fh if line.strip()])
    if len(y) != H.n:
        print(f"error: expected {H.n} observations, got {len(y)}", file=sys.stderr)
        return EXIT_USAGE
    sigma2 = _sigma2_from_args(args, H)
    if args.serial:
        result = decode_awgn(y, sigma2, args.max_iter, tables, H)
    else:
        with ParallelDecoder(tables, group_size=args.group_size, n_threads=args.threads) as dec:
            result = dec.decode(y, sigma2, args.max_iter)
    print("".join(str(int(b)) for b in result.estimate))
    print(f"success: {result.success}")
    print(f"iterations: {result.iterations_used}")
    return EXIT_OK if result.success else EXIT_DECODE_FAILED


def cmd_ber(args) -> int:
    H = load_code(args.code, args.format)
    ebno_points = [float(tok) for tok in args.ebno.split(",") if tok.strip()]
    points = ber_sweep(
        H,
        ebno_points,
        frames=args.frames,
        max_iterations=args.max_iter,
        seed=args.seed,
        group_size=args.group_size,
        decoders_in_flight=args.decoders,
    )
    csv_text = ber_csv(points)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    print(f"# code n={H.n} m={H.m} edges={H.total_edges} frames={args.frames} seed={args.seed}")
    for pt in points:
        print(
            f"# {pt.ebno_db:6.2f} dB  sigma2={pt.sigma2:.6f}  ber={pt.ber:.3e}  "
            f"mean_iters={pt.mean_iterations:.2f}  failures={pt.failures}"
        )
    return EXIT_OK


def cmd_bench(args) -> int:
    H = load_code(args.code, args.format)
    tables = CodeTables.from_matrix(H)
    sigma2 = ebno_to_sigma2(float(args.ebno), (H.n - H.m) / H.n)
    frames = []
    for f in range(args.frames):
        _, y = transmit_all_zero(H.n, sigma2, derive_state(args.seed, 0, f))
        frames.append(y)

    t0 = time.perf_counter()
    serial_results = [decode_awgn(y, sigma2, args.max_iter, tables, H) for y in frames]
    t_serial = time.perf_counter() - t0

    with ParallelDecoder(tables, group_size=args.group_size, n_threads=args.threads) as dec:
        t0 = time.perf_counter()
        parallel_results = [dec.decode(y, sigma2, args.max_iter) for y in frames]
        t_parallel = time.perf_counter() - t0

    mismatches = sum(
        1
        for a, b in zip(serial_results, parallel_results)
        if not (
            np.array_equal(a.estimate, b.estimate)
            and a.success == b.success
            and a.iterations_used == b.iterations_used
            and np.array_equal(a.syndrome, b.syndrome)
        )
    )
    fps_serial = args.frames / t_serial if t_serial > 0 else float("inf")
    fps_parallel = args.frames / t_parallel if t_parallel > 0 else float("inf")
    print(f"code: n={H.n} m={H.m} edges={H.total_edges}")
    print(f"frames: {args.frames}  ebno: {float(args.ebno)} dB  sigma2: {sigma2:.6f}  max-iter: {args.max_iter}")
    print(f"group size: {args.group_size}  threads: {args.threads}")
    print(f"serial:   {t_serial:.3f} s  ({fps_serial:.1f} frames/s)")
    print(f"parallel: {t_parallel:.3f} s  ({fps_parallel:.1f} frames/s)")
    print(f"speedup: {t_serial / t_parallel if t_parallel > 0 else float('inf'):.2f}")
    if mismatches:
        print(f"error: {mismatches} frames differ between serial and parallel", file=sys.stderr)
        return EXIT_DECODE_FAILED
    print(f"results: parallel output bit-identical to serial over {args.frames} frames")
    if fps_parallel < fps_serial:
        print("warning: parallel engine slower than the serial reference on this machine", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    H = generate_gallager_code(args.n, args.wc, args.wr, args.seed)
    text = serialize_alist(H)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"wrote {args.out}: n={H.n} m={H.m} edges={H.total_edges}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {
    "tables": cmd_tables,
    "decode": cmd_decode,
    "ber": cmd_ber,
    "bench": cmd_bench,
    "gen": cmd_gen,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
