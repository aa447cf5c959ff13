"""Edge-parallel decoder with a paged working-group execution model.

One logical worker exists per lane of a working group of ``group_size``
synchronized workers.  When the code has more edges than lanes, each phase
sweeps the edges in pages of ``group_size``; lane ``lid`` of page ``p``
handles edge ``p * group_size + lid``.  Phases are separated by barriers and
obey a strict discipline: a phase only reads arrays frozen at the previous
barrier and only writes either lane-private locations or locations that every
writer of the group stores the same value into (estimation and syndrome).
Because no phase reads what it writes, page order inside a phase is
unobservable, and any number of physical threads may execute the lanes.

The payoff of the discipline is exact determinism: for every code, input,
group size, and thread count, the result is bit-identical to the serial
reference decoder, because each lane performs the same scalar operation
sequence the reference performs for that edge.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckMatrix
from .serial import DEFAULT_MAX_ITERATIONS, DecodeResult, priors_awgn
from .tables import CodeTables

DEFAULT_GROUP_SIZE = 512


@dataclass(frozen=True)
class PagePlan:
    """Split of total_edges lanes into pages of at most group_size."""

    total_edges: int
    group_size: int
    page_starts: tuple[int, ...]

    @property
    def page_count(self) -> int:
        return len(self.page_starts)

    def page_width(self, page: int) -> int:
        """Active lanes in a page; trailing lanes of the last page idle."""
        return min(self.group_size, self.total_edges - self.page_starts[page])


def plan_pages(total_edges: int, group_size: int) -> PagePlan:
    if group_size < 1:
        raise ValueError("group_size must be at least 1")
    if total_edges < 1:
        raise ValueError("total_edges must be at least 1")
    return PagePlan(total_edges, group_size, tuple(range(0, total_edges, group_size)))


@dataclass
class SharedDecodeState:
    """Arrays shared by all workers of one decoder instance."""

    p: np.ndarray  # n priors
    q: np.ndarray  # E variable-to-check messages
    r: np.ndarray  # E check-to-variable messages
    estimate: np.ndarray  # n hard bits
    syndrome: np.ndarray  # m parity bits

    @classmethod
    def allocate(cls, tables: CodeTables) -> "SharedDecodeState":
        return cls(
            p=np.zeros(tables.n),
            q=np.zeros(tables.total_edges),
            r=np.full(tables.total_edges, 0.5),
            estimate=np.zeros(tables.n, dtype=np.uint8),
            syndrome=np.zeros(tables.m, dtype=np.uint8),
        )


def _gather_steps(idx, starts, sizes, skip_self):
    """Per group offset: (sel, pos) pairs driving one SIMD-style product step.

    sel indexes into idx (the lanes still active at this offset) and pos holds
    the group position each of those lanes reads.  Iterating the offsets in
    order makes every lane multiply its accumulator in ascending position
    order, exactly like the serial reference's inner loop.
    """
    steps = []
    if len(idx) == 0:
        return steps
    lane_sizes = sizes[idx]
    lane_starts = starts[idx]
    for off in range(int(lane_sizes.max())):
        active = off < lane_sizes
        pos = lane_starts + off
        if skip_self:
            active = active & (pos != idx)
        sel = np.flatnonzero(active)
        if len(sel):
            steps.append((sel, pos[sel]))
    return steps


def _to_check_lanes(p, r, q_out, idx, vvec, steps):
    """q for the edges in idx (vvec = variable node per lane)."""
    pj = p[vvec]
    q0 = 1.0 - pj
    q1 = pj.copy()
    for sel, pos in steps:
        rp = r[pos]
        q0[sel] = q0[sel] * (1.0 - rp)
        q1[sel] = q1[sel] * rp
    den = q0 + q1
    zero = den == 0.0
    if zero.any():
        qk = np.empty_like(den)
        qk[zero] = 0.5
        nz = ~zero
        qk[nz] = q1[nz] / den[nz]
    else:
        qk = q1 / den
    q_out[idx] = qk


def _to_variable_lanes(q, r_out, targets, lane_count, steps):
    """r for check-oriented positions; steps carry pre-mapped edge indices."""
    prod = np.ones(lane_count)
    for sel, edges in steps:
        prod[sel] = prod[sel] * (1.0 - 2.0 * q[edges])
    r_out[targets] = 1.0 - (0.5 + 0.5 * prod)


def _estimate_lanes(p, r, est_out, vvec, steps):
    """Hard decision per lane; every lane of a variable writes the same bit."""
    pj = p[vvec]
    q0 = 1.0 - pj
    q1 = pj.copy()
    for sel, pos in steps:
        rp = r[pos]
        q0[sel] = q0[sel] * (1.0 - rp)
        q1[sel] = q1[sel] * rp
    est_out[vvec] = np.where(q0 > q1, 0, 1).astype(np.uint8)


def _syndrome_lanes(est, z_out, targets, lane_count, steps):
    """Parity per lane; steps carry pre-mapped variable indices."""
    val = np.zeros(lane_count, dtype=np.uint8)
    for sel, vids in steps:
        val[sel] ^= est[vids]
    z_out[targets] = val


def _page_indices(plan: PagePlan, page: int) -> np.ndarray:
    start = plan.page_starts[page]
    return np.arange(start, start + plan.page_width(page), dtype=np.int64)


def parallel_to_check(state: SharedDecodeState, tables: CodeTables, plan: PagePlan) -> None:
    """Page-swept variable-to-check update; writes state.q."""
    tv = tables.variable
    for page in range(plan.page_count):
        idx = _page_indices(plan, page)
        steps = _gather_steps(idx, tv.s, tv.t, skip_self=True)
        _to_check_lanes(state.p, state.r, state.q, idx, tv.v[idx], steps)


def parallel_to_variable(state: SharedDecodeState, tables: CodeTables, plan: PagePlan) -> None:
    """Page-swept check-to-variable update; writes state.r through e[k]."""
    tc = tables.check
    for page in range(plan.page_count):
        idx = _page_indices(plan, page)
        steps = [(sel, tc.e[pos]) for sel, pos in _gather_steps(idx, tc.s, tc.t, skip_self=True)]
        _to_variable_lanes(state.q, state.r, tc.e[idx], len(idx), steps)


def parallel_estimate(state: SharedDecodeState, tables: CodeTables, plan: PagePlan) -> None:
    """Page-swept estimation; redundant equal writes inside variable groups."""
    tv = tables.variable
    for page in range(plan.page_count):
        idx = _page_indices(plan, page)
        steps = _gather_steps(idx, tv.s, tv.t, skip_self=False)
        _estimate_lanes(state.p, state.r, state.estimate, tv.v[idx], steps)


def parallel_syndrome(state: SharedDecodeState, tables: CodeTables, plan: PagePlan) -> None:
    """Page-swept syndrome; redundant equal writes inside check groups."""
    tc = tables.check
    for page in range(plan.page_count):
        idx = _page_indices(plan, page)
        steps = [(sel, tc.v[pos]) for sel, pos in _gather_steps(idx, tc.s, tc.t, skip_self=False)]
        _syndrome_lanes(state.estimate, state.syndrome, tc.c[idx], len(idx), steps)


@dataclass
class _Assignment:
    """Precomputed work of one physical thread: its lanes across all pages."""

    idx: np.ndarray  # edge indices (variable orientation)
    v: np.ndarray  # variable node per lane
    chk_steps: list  # to-check product steps (self skipped)
    est_steps: list  # estimation product steps (no skip)
    e_targets: np.ndarray  # canonical edge per check-oriented position
    var_steps: list  # to-variable product steps, mapped to edge indices
    c_targets: np.ndarray  # check node per check-oriented position
    syn_steps: list  # syndrome steps, mapped to variable indices


class _Job:
    """Per-decode control block shared across the worker threads."""

    __slots__ = ("state", "max_iterations", "success", "iterations", "error")

    def __init__(self, state: SharedDecodeState, max_iterations: int):
        self.state = state
        self.max_iterations = max_iterations
        self.success = False
        self.iterations = 0
        self.error: BaseException | None = None


class ParallelDecoder:
    """Reusable edge-parallel decoder bound to one code and one configuration.

    The instance owns ``n_threads - 1`` pool threads plus the calling thread;
    each decode allocates fresh shared state, so with n_threads == 1 a single
    instance may be used concurrently from several frame-level workers.
    """

    def __init__(
        self,
        tables: CodeTables,
        group_size: int = DEFAULT_GROUP_SIZE,
        n_threads: int = 1,
    ):
        if n_threads < 1:
            raise ValueError("n_threads must be at least 1")
        self.tables = tables
        self.plan = plan_pages(tables.total_edges, group_size)
        self.group_size = group_size
        self.n_threads = n_threads
        self._assignments = [
            self._build_assignment(w) for w in range(n_threads)
        ]
        self._barrier = threading.Barrier(n_threads) if n_threads > 1 else None
        self._job: _Job | None = None
        self._go: list[threading.Event] = []
        self._threads: list[threading.Thread] = []
        self._closed = False
        for w in range(1, n_threads):
            ev = threading.Event()
            th = threading.Thread(target=self._pool_main, args=(w, ev), daemon=True)
            self._go.append(ev)
            self._threads.append(th)
            th.start()

    def _lane_slice(self, worker: int) -> tuple[int, int]:
        chunk = -(-self.group_size // self.n_threads)  # ceil
        lo = min(worker * chunk, self.group_size)
        return lo, min(lo + chunk, self.group_size)

    def _build_assignment(self, worker: int) -> _Assignment:
        lo, hi = self._lane_slice(worker)
        pieces = []
        for start in self.plan.page_starts:
            a = start + lo
            b = min(start + hi, self.plan.total_edges)
            if a < b:
                pieces.append(np.arange(a, b, dtype=np.int64))
        idx = np.concatenate(pieces) if pieces else np.empty(0, dtype=np.int64)
        tv = self.tables.variable
        tc = self.tables.check
        var_steps = [
            (sel, tc.e[pos])
            for sel, pos in _gather_steps(idx, tc.s, tc.t, skip_self=True)
        ]
        syn_steps = [
            (sel, tc.v[pos])
            for sel, pos in _gather_steps(idx, tc.s, tc.t, skip_self=False)
        ]
        return _Assignment(
            idx=idx,
            v=tv.v[idx],
            chk_steps=_gather_steps(idx, tv.s, tv.t, skip_self=True),
            est_steps=_gather_steps(idx, tv.s, tv.t, skip_self=False),
            e_targets=tc.e[idx],
            var_steps=var_steps,
            c_targets=tc.c[idx],
            syn_steps=syn_steps,
        )

    # -- worker pool ----------------------------------------------------

    def _pool_main(self, worker: int, go: threading.Event):
        while True:
            go.wait()
            go.clear()
            job = self._job
            if job is None:
                return
            try:
                self._run_worker(worker, job)
            except BaseException as exc:  # surface through the coordinator
                if job.error is None and not isinstance(exc, threading.BrokenBarrierError):
                    job.error = exc
                if self._barrier is not None:
                    self._barrier.abort()

    def _sync(self):
        if self._barrier is not None:
            self._barrier.wait()

    def _run_worker(self, worker: int, job: _Job):
        a = self._assignments[worker]
        st = job.state
        # load phase: every lane copies its variable's prior into q
        st.q[a.idx] = st.p[a.v]
        st.r[a.idx] = 0.5
        self._sync()
        self._phase_to_variable(a, st)
        self._sync()
        self._phase_estimate(a, st)
        self._sync()
        self._phase_syndrome(a, st)
        self._sync()
        if worker == 0:
            job.iterations = 0
            job.success = not st.syndrome.any()
        self._sync()
        if job.success:
            return
        it = 0
        while it < job.max_iterations:
            it += 1
            self._phase_to_check(a, st)
            self._sync()
            self._phase_to_variable(a, st)
            self._sync()
            self._phase_estimate(a, st)
            self._sync()
            self._phase_syndrome(a, st)
            self._sync()
            if worker == 0:
                # the all-zero test stays serial on one worker per round
                job.iterations = it
                job.success = not st.syndrome.any()
            self._sync()
            if job.success:
                return

    def _phase_to_check(self, a: _Assignment, st: SharedDecodeState):
        _to_check_lanes(st.p, st.r, st.q, a.idx, a.v, a.chk_steps)

    def _phase_to_variable(self, a: _Assignment, st: SharedDecodeState):
        _to_variable_lanes(st.q, st.r, a.e_targets, len(a.idx), a.var_steps)

    def _phase_estimate(self, a: _Assignment, st: SharedDecodeState):
        _estimate_lanes(st.p, st.r, st.estimate, a.v, a.est_steps)

    def _phase_syndrome(self, a: _Assignment, st: SharedDecodeState):
        _syndrome_lanes(st.estimate, st.syndrome, a.c_targets, len(a.idx), a.syn_steps)

    # -- public API -----------------------------------------------------

    def decode(self, y, sigma2: float, max_iterations: int = DEFAULT_MAX_ITERATIONS) -> DecodeResult:
        if self._closed:
            raise RuntimeError("decoder is closed")
        if max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        state = SharedDecodeState.allocate(self.tables)
        p = priors_awgn(y, sigma2)
        if len(p) != self.tables.n:
            raise ValueError(f"expected {self.tables.n} observations, got {len(p)}")
        state.p[:] = p
        job = _Job(state, max_iterations)
        if self._barrier is None:
            self._run_worker(0, job)
        else:
            self._barrier.reset()
            self._job = job
            for ev in self._go:
                ev.set()
            try:
                self._run_worker(0, job)
            except threading.BrokenBarrierError:
                pass
            except BaseException as exc:
                if job.error is None:
                    job.error = exc
                self._barrier.abort()  # release any pool thread still waiting
            if job.error is not None:
                # pool threads may be mid-phase; refuse further use of this instance
                self._closed = True
                raise job.error
        return DecodeResult(
            estimate=state.estimate.copy(),
            success=job.success,
            iterations_used=job.iterations,
            syndrome=state.syndrome.copy(),
        )

    def close(self):
        if self._closed:
            return
        self._closed = True
        self._job = None
        for ev in self._go:
            ev.set()
        for th in self._threads:
            th.join(timeout=5.0)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def parallel_decode_awgn(
    y,
    sigma2: float,
    max_iterations: int,
    tables: CodeTables,
    H: ParityCheckMatrix | None = None,
    group_size: int = DEFAULT_GROUP_SIZE,
    n_threads: int = 1,
) -> DecodeResult:
    """One-shot decode through a throwaway ParallelDecoder.

    H is accepted for interface symmetry with the serial decoder and checked
    against the tables when given; the syndrome itself is table-driven.
    """
    if H is not None and (H.n != tables.n or H.m != tables.m):
        raise ValueError("H does not match the tables")
    with ParallelDecoder(tables, group_size=group_size, n_threads=n_threads) as dec:
        return dec.decode(y, sigma2, max_iterations)
