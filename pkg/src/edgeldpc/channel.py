"""AWGN channel, BPSK modulation, and the bit error rate harness.

Linearity of the code lets the simulator transmit nothing but the all-zero
codeword: every 1 in a decoded estimate is a bit error.  Bit 0 modulates to
-1 (bit b to 2b - 1), the unique mapping under which the decoder prior
1/(1 + exp(-2y/s2)) is the posterior probability of bit 1.  Noise variance
comes from Eb/N0 with unit bit energy: s2 = 1 / (2 R 10^(dB/10)).

Every frame gets its own generator state derived from (seed, point, frame),
so a sweep is reproducible bit for bit no matter how many decoders run in
flight.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckMatrix
from .engine import DEFAULT_GROUP_SIZE, ParallelDecoder
from .rng import RngState, derive_state, rng_next, rng_uniform01  # noqa: F401  (re-export)
from .serial import DEFAULT_MAX_ITERATIONS
from .tables import CodeTables

DEFAULT_DECODERS_IN_FLIGHT = 100


def box_muller(u1: float, u2: float) -> tuple[float, float]:
    """Standard normal pair from two uniforms, u1 in (0, 1]."""
    if u1 <= 0.0:
        raise ValueError("u1 must be positive")
    radius = math.sqrt(-2.0 * math.log(u1))
    angle = 2.0 * math.pi * u2
    return radius * math.cos(angle), radius * math.sin(angle)


def ebno_to_sigma2(ebno_db: float, rate: float) -> float:
    """Noise variance for a given Eb/N0 (dB) at code rate R, unit bit energy."""
    if not 0.0 < rate < 1.0:
        raise ValueError("rate must be in (0, 1)")
    return 1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))


def transmit_all_zero(n: int, sigma2: float, state: RngState) -> tuple[RngState, np.ndarray]:
    """Received vector for the all-zero codeword: y_j = -1 + sigma * z_j.

    Normals are drawn pairwise via Box-Muller, consuming ceil(n/2) pairs of
    uniforms; for odd n the trailing half-pair is discarded.
    """
    if sigma2 <= 0.0:
        raise ValueError("sigma2 must be positive")
    sigma = math.sqrt(sigma2)
    y = np.empty(n)
    i = 0
    while i < n:
        state, u1 = rng_uniform01(state)
        state, u2 = rng_uniform01(state)
        z0, z1 = box_muller(u1, u2)
        y[i] = -1.0 + sigma * z0
        i += 1
        if i < n:
            y[i] = -1.0 + sigma * z1
            i += 1
    return state, y


@dataclass(frozen=True)
class BerPoint:
    """One row of a sweep: everything needed to redraw a BER curve."""

    ebno_db: float
    sigma2: float
    frames: int
    bit_errors: int
    ber: float
    mean_iterations: float
    failures: int


def ber_sweep(
    H: ParityCheckMatrix,
    ebno_points,
    frames: int,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    seed: int = 0,
    group_size: int = DEFAULT_GROUP_SIZE,
    decoders_in_flight: int = 1,
    rate: float | None = None,
) -> list[BerPoint]:
    """Decode `frames` noisy all-zero frames per Eb/N0 point and aggregate.

    decoders_in_flight frames decode concurrently; per-frame seeding and a
    fixed frame-order fold make the output independent of that concurrency.
    The rate defaults to the nominal (n - m)/n.
    """
    if frames < 1:
        raise ValueError("frames must be at least 1")
    if decoders_in_flight < 1:
        raise ValueError("decoders_in_flight must be at least 1")
    tables = CodeTables.from_matrix(H)
    R = rate if rate is not None else (H.n - H.m) / H.n
    points = []
    # one single-threaded engine instance; decode() keeps no instance state
    with ParallelDecoder(tables, group_size=group_size, n_threads=1) as dec:
        for index, ebno_db in enumerate(ebno_points):
            sigma2 = ebno_to_sigma2(float(ebno_db), R)

            def frame(f: int, _s2=sigma2, _idx=index):
                state = derive_state(seed, _idx, f)
                _, y = transmit_all_zero(H.n, _s2, state)
                res = dec.decode(y, _s2, max_iterations)
                return int(res.estimate.sum()), res.iterations_used, res.success

            if decoders_in_flight > 1:
                with ThreadPoolExecutor(max_workers=decoders_in_flight) as pool:
                    outcomes = list(pool.map(frame, range(frames)))
            else:
                outcomes = [frame(f) for f in range(frames)]

            bit_errors = sum(o[0] for o in outcomes)
            total_iters = sum(o[1] for o in outcomes)
            failures = sum(1 for o in outcomes if not o[2])
            points.append(
                BerPoint(
                    ebno_db=float(ebno_db),
                    sigma2=sigma2,
                    frames=frames,
                    bit_errors=bit_errors,
                    ber=bit_errors / (frames * H.n),
                    mean_iterations=total_iters / frames,
                    failures=failures,
                )
            )
    return points


def ber_csv(points: list[BerPoint]) -> str:
    """CSV rendering with full-precision (round-trip) floats."""
    lines = ["ebno_db,sigma2,frames,bit_errors,ber,mean_iterations,failures"]
    for pt in points:
        lines.append(
            f"{pt.ebno_db!r},{pt.sigma2!r},{pt.frames},{pt.bit_errors},"
            f"{pt.ber!r},{pt.mean_iterations!r},{pt.failures}"
        )
    return "\n".join(lines) + "\n"
