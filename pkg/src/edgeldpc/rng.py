"""Deterministic 64-bit pseudo-random generation.

The generator is xorshift128+ (128 bits of state, shift triple 23/18/5),
advanced functionally: every draw returns the next state instead of mutating
it, so streams can be forked and replayed without hidden coupling.  All
arithmetic is plain wrapping integer arithmetic, which makes the streams
identical across platforms and interpreter versions.
"""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = (1 << 64) - 1

# splitmix64 increment (odd, good avalanche when combined with _mix64)
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class RngState:
    """xorshift128+ state: two 64-bit words, never both zero."""

    s0: int
    s1: int

    def __post_init__(self):
        if not (0 <= self.s0 <= MASK64 and 0 <= self.s1 <= MASK64):
            raise ValueError("state words must be unsigned 64-bit integers")
        if self.s0 == 0 and self.s1 == 0:
            raise ValueError("all-zero state is a fixed point of xorshift128+")


def rng_next(state: RngState) -> tuple[RngState, int]:
    """Advance one step; returns (new state, 64-bit output)."""
    x = state.s0
    y = state.s1
    x ^= (x << 23) & MASK64
    x ^= x >> 18
    x ^= y ^ (y >> 5)
    return RngState(y, x), (x + y) & MASK64


def u01_from_bits(x: int) -> float:
    """Map a 64-bit word to (0, 1]: top 53 bits plus one, scaled by 2^-53.

    The +1 offset keeps the value strictly positive so log(u) stays finite;
    the all-ones word maps to exactly 1.0.
    """
    return ((x >> 11) + 1) * 2.0**-53


def rng_uniform01(state: RngState) -> tuple[RngState, float]:
    """Uniform double in (0, 1]."""
    state, x = rng_next(state)
    return state, u01_from_bits(x)


def _mix64(z: int) -> int:
    # splitmix64 finalizer, a bijection on 64-bit words with _mix64(0) = 0
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_state(*keys: int) -> RngState:
    """Build an RngState from integer keys via splitmix64-style mixing.

    Distinct key tuples yield well-separated streams; used for per-frame
    seeding so that results do not depend on which worker decodes a frame.
    """
    acc = 0
    for k in keys:
        acc = _mix64((acc + _GOLDEN + (k & MASK64)) & MASK64)
    s0 = _mix64((acc + _GOLDEN) & MASK64)
    s1 = _mix64((acc + 2 * _GOLDEN) & MASK64)
    if s0 == 0 and s1 == 0:  # unreachable for distinct mixed words, kept as a guard
        s1 = _GOLDEN
    return RngState(s0, s1)


def shuffle(items: list, state: RngState) -> RngState:
    """In-place Fisher-Yates shuffle driven by rng_next; returns the new state."""
    for i in range(len(items) - 1, 0, -1):
        state, x = rng_next(state)
        j = (x * (i + 1)) >> 64  # multiply-shift bounded draw, no bias worth caring about here
        items[i], items[j] = items[j], items[i]
    return state


def randrange(state: RngState, bound: int) -> tuple[RngState, int]:
    """Draw an integer in [0, bound) by multiply-shift."""
    state, x = rng_next(state)
    return state, (x * bound) >> 64
