"""Serial sum-product decoder, the correctness reference.

Messages are probabilities of bit = 1, one scalar per edge, indexed in
canonical (variable-oriented) edge order.  Every product over a group runs in
ascending position order; the parallel engine performs the identical
per-edge operation sequences, which is what makes the two paths bit-exact
rather than merely close.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckMatrix
from .tables import CodeTables

DEFAULT_MAX_ITERATIONS = 50


@dataclass
class MessageState:
    """Priors p (per variable) and edge messages q, r (per edge), all in [0, 1]."""

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray


@dataclass
class DecodeResult:
    estimate: np.ndarray  # hard bits, length n
    success: bool  # syndrome all zero
    iterations_used: int
    syndrome: np.ndarray  # length m


def priors_awgn(y, sigma2: float) -> np.ndarray:
    """Posterior probability of bit 1 for BPSK over AWGN: 1/(1 + exp(-2y/s2)).

    Shared by the serial and parallel initialization so both paths see
    bit-identical priors (libm exp implementations are not interchangeable
    at the last ulp).
    """
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    y = np.asarray(y, dtype=np.float64)
    with np.errstate(over="ignore"):  # exp overflow saturates p to exactly 0.0
        return 1.0 / (1.0 + np.exp(-2.0 * y / sigma2))


def initialize(y, sigma2: float, tables: CodeTables) -> MessageState:
    """Priors from the channel; q copies each edge's prior; r starts at 1/2."""
    p = priors_awgn(y, sigma2)
    if len(p) != tables.n:
        raise ValueError(f"expected {tables.n} observations, got {len(p)}")
    q = p[tables.variable.v]
    r = np.full(tables.total_edges, 0.5)
    return MessageState(p, q, r)


def values_to_check(p, r, tables: CodeTables) -> np.ndarray:
    """First half of an iteration: messages from variable nodes.

    For edge k of variable j, the outgoing pair is the prior times the product
    of incoming r over the other edges of j's group (ascending, skipping k),
    normalized to q0 + q1 = 1.  A doubly-underflowed pair saturates to 1/2.
    """
    tv = tables.variable
    v = tv.v.tolist()
    s = tv.s.tolist()
    t = tv.t.tolist()
    pl = np.asarray(p, dtype=np.float64).tolist()
    rl = np.asarray(r, dtype=np.float64).tolist()
    q = [0.0] * tables.total_edges
    for k in range(tables.total_edges):
        pj = pl[v[k]]
        q0 = 1.0 - pj
        q1 = pj
        for i in range(s[k], s[k] + t[k]):
            if i == k:
                continue
            ri = rl[i]
            q0 *= 1.0 - ri
            q1 *= ri
        den = q0 + q1
        q[k] = 0.5 if den == 0.0 else q1 / den
    return np.array(q)


def values_to_variable(q, tables: CodeTables) -> np.ndarray:
    """Second half of an iteration: messages from check nodes.

    Walking the check orientation, position k targets edge e[k]; the parity
    convolution is r0 = 1/2 + 1/2 * prod(1 - 2 q) over the other positions of
    the check group, and the stored message is 1 - r0.
    """
    tc = tables.check
    ebar = tc.e.tolist()
    sbar = tc.s.tolist()
    tbar = tc.t.tolist()
    ql = np.asarray(q, dtype=np.float64).tolist()
    r = [0.0] * tables.total_edges
    for k in range(tables.total_edges):
        prod = 1.0
        for i in range(sbar[k], sbar[k] + tbar[k]):
            if i == k:
                continue
            prod *= 1.0 - 2.0 * ql[ebar[i]]
        r[ebar[k]] = 1.0 - (0.5 + 0.5 * prod)
    return np.array(r)


def estimate(p, r, tables: CodeTables) -> np.ndarray:
    """Hard decision per variable from the prior and ALL incoming messages.

    Q0 > Q1 decides 0; ties decide 1.
    """
    starts = tables.var_group_start.tolist()
    sizes = tables.var_group_size.tolist()
    pl = np.asarray(p, dtype=np.float64).tolist()
    rl = np.asarray(r, dtype=np.float64).tolist()
    c_hat = [0] * tables.n
    for j in range(tables.n):
        q0 = 1.0 - pl[j]
        q1 = pl[j]
        for i in range(starts[j], starts[j] + sizes[j]):
            ri = rl[i]
            q0 *= 1.0 - ri
            q1 *= ri
        c_hat[j] = 0 if q0 > q1 else 1
    return np.array(c_hat, dtype=np.uint8)


def syndrome(c_hat, H: ParityCheckMatrix) -> np.ndarray:
    """z_i = XOR of estimate bits over row i of H."""
    bits = [int(b) & 1 for b in c_hat]
    if len(bits) != H.n:
        raise ValueError(f"estimate length {len(bits)} does not match n={H.n}")
    z = [0] * H.m
    for i, cols in enumerate(H.row_cols()):
        acc = 0
        for j in cols:
            acc ^= bits[j]
        z[i] = acc
    return np.array(z, dtype=np.uint8)


def decode_awgn(
    y,
    sigma2: float,
    max_iterations: int,
    tables: CodeTables,
    H: ParityCheckMatrix,
) -> DecodeResult:
    """Full soft-decision decode of one received vector.

    Phase order: initialize, one check-to-variable pass fed by the raw priors,
    estimate, syndrome test; then rounds of (to-check, to-variable, estimate,
    syndrome test) until the syndrome clears or max_iterations rounds ran.
    """
    if max_iterations < 0:
        raise ValueError("max_iterations must be non-negative")
    state = initialize(y, sigma2, tables)
    r = values_to_variable(state.q, tables)
    c_hat = estimate(state.p, r, tables)
    z = syndrome(c_hat, H)
    if not z.any():
        return DecodeResult(c_hat, True, 0, z)
    for it in range(1, max_iterations + 1):
        q = values_to_check(state.p, r, tables)
        r = values_to_variable(q, tables)
        c_hat = estimate(state.p, r, tables)
        z = syndrome(c_hat, H)
        if not z.any():
            return DecodeResult(c_hat, True, it, z)
    return DecodeResult(c_hat, False, max_iterations, z)
