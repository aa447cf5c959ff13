"""Sparse binary parity-check matrices and their file formats.

A code is defined by its m-by-n parity-check matrix H.  Rows are check nodes,
columns are variable nodes, and every 1 entry is an edge of the Tanner graph.
H is kept as the ordered list of its (row, col) coordinates: the edge count is
the working size of everything downstream, so there is no point in storing a
bitmap.

Supported text formats:

* alist, the usual interchange format for sparse parity-check matrices
  (1-based indices on disk, 0-based in memory);
* dense rows of 0/1 characters for tutorial-sized codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import RngState, derive_state, randrange, shuffle


class CodeFormatError(ValueError):
    """A code file that cannot be parsed; message carries the line number."""


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Binary m-by-n matrix stored as sorted (row, col) coordinates.

    Invariants enforced at construction: indices in range, no duplicate
    entries, and no empty row or column (decoding is undefined for nodes
    without neighbors, so degenerate codes are rejected outright).
    """

    n: int
    m: int
    ones: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("matrix dimensions must be positive")
        entries = tuple(sorted((int(r), int(c)) for r, c in self.ones))
        rows_seen = [False] * self.m
        cols_seen = [False] * self.n
        prev = None
        for r, c in entries:
            if not (0 <= r < self.m and 0 <= c < self.n):
                raise ValueError(f"entry ({r}, {c}) outside a {self.m}x{self.n} matrix")
            if (r, c) == prev:
                raise ValueError(f"duplicate entry ({r}, {c})")
            prev = (r, c)
            rows_seen[r] = True
            cols_seen[c] = True
        if not all(rows_seen):
            raise ValueError(f"row {rows_seen.index(False)} has no entries")
        if not all(cols_seen):
            raise ValueError(f"column {cols_seen.index(False)} has no entries")
        object.__setattr__(self, "ones", entries)

    @property
    def k(self) -> int:
        """Nominal information length n - m (assumes full-rank H)."""
        return self.n - self.m

    @property
    def total_edges(self) -> int:
        return len(self.ones)

    def col_rows(self) -> list[list[int]]:
        """Row indices of each column, ascending."""
        cols: list[list[int]] = [[] for _ in range(self.n)]
        for r, c in self.ones:
            cols[c].append(r)
        for rows in cols:
            rows.sort()
        return cols

    def row_cols(self) -> list[list[int]]:
        """Column indices of each row, ascending."""
        rows: list[list[int]] = [[] for _ in range(self.m)]
        for r, c in self.ones:  # ones are sorted row-major already
            rows[r].append(c)
        return rows

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.m, self.n), dtype=np.uint8)
        for r, c in self.ones:
            dense[r, c] = 1
        return dense


@dataclass(frozen=True)
class CodeInfo:
    """Edge/node counts of a code, the sizes every decoder array is keyed by."""

    total_edges: int
    var_nodes: int
    check_nodes: int

    @classmethod
    def from_matrix(cls, H: ParityCheckMatrix) -> "CodeInfo":
        return cls(H.total_edges, H.n, H.m)


def _int_fields(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise CodeFormatError(f"line {lineno}: expected integers, got {line.strip()!r}") from None


def parse_alist(text: str) -> ParityCheckMatrix:
    """Parse alist text into a ParityCheckMatrix.

    Layout: line 1 is "n m", line 2 the maximum column/row degrees, then the
    n column degrees, the m row degrees, one 1-based row list per column and
    one 1-based column list per row.  Zero entries (padding used by some
    published files) are ignored.  The row lists are cross-checked against the
    column lists and any disagreement is rejected.
    """
    lines = text.splitlines()
    pos = 0

    def next_line() -> tuple[list[int], int]:
        nonlocal pos
        while pos < len(lines):
            pos += 1
            if lines[pos - 1].strip():
                return _int_fields(lines[pos - 1], pos), pos
        raise CodeFormatError(f"line {len(lines) + 1}: unexpected end of file")

    head, lineno = next_line()
    if len(head) != 2:
        raise CodeFormatError(f"line {lineno}: expected 'n m'")
    n, m = head
    if n < 1 or m < 1:
        raise CodeFormatError(f"line {lineno}: dimensions must be positive")

    maxdeg, lineno = next_line()
    if len(maxdeg) != 2:
        raise CodeFormatError(f"line {lineno}: expected max column/row degrees")

    col_deg, lineno = next_line()
    if len(col_deg) != n:
        raise CodeFormatError(f"line {lineno}: expected {n} column degrees, got {len(col_deg)}")
    row_deg, lineno = next_line()
    if len(row_deg) != m:
        raise CodeFormatError(f"line {lineno}: expected {m} row degrees, got {len(row_deg)}")

    ones = []
    row_sets: list[set[int]] = [set() for _ in range(m)]
    for c in range(n):
        entries, lineno = next_line()
        rows = [e for e in entries if e != 0]
        if len(rows) != col_deg[c]:
            raise CodeFormatError(
                f"line {lineno}: column {c} lists {len(rows)} entries, degree says {col_deg[c]}"
            )
        if len(set(rows)) != len(rows):
            raise CodeFormatError(f"line {lineno}: duplicate row index in column {c}")
        for r in rows:
            if not 1 <= r <= m:
                raise CodeFormatError(f"line {lineno}: row index {r} out of range 1..{m}")
            ones.append((r - 1, c))
            row_sets[r - 1].add(c)

    for r in range(m):
        entries, lineno = next_line()
        cols = [e - 1 for e in entries if e != 0]
        if len(cols) != row_deg[r]:
            raise CodeFormatError(
                f"line {lineno}: row {r} lists {len(cols)} entries, degree says {row_deg[r]}"
            )
        for c in cols:
            if not 0 <= c < n:
                raise CodeFormatError(f"line {lineno}: column index {c + 1} out of range 1..{n}")
        if set(cols) != row_sets[r] or len(set(cols)) != len(cols):
            raise CodeFormatError(f"line {lineno}: inconsistent adjacency at row {r}")

    return ParityCheckMatrix(n, m, tuple(ones))


def serialize_alist(H: ParityCheckMatrix) -> str:
    """Render H as alist text (1-based, unpadded, ascending lists)."""
    cols = H.col_rows()
    rows = H.row_cols()
    out = [
        f"{H.n} {H.m}",
        f"{max(len(c) for c in cols)} {max(len(r) for r in rows)}",
        " ".join(str(len(c)) for c in cols),
        " ".join(str(len(r)) for r in rows),
    ]
    out += [" ".join(str(r + 1) for r in col) for col in cols]
    out += [" ".join(str(c + 1) for c in row) for row in rows]
    return "\n".join(out) + "\n"


def parse_dense(text: str) -> ParityCheckMatrix:
    """Parse whitespace-separated (or contiguous) rows of 0/1 characters."""
    ones = []
    width = None
    nrows = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        bits = line.replace(" ", "").replace("\t", "")
        if not bits:
            continue
        if any(ch not in "01" for ch in bits):
            bad = next(ch for ch in bits if ch not in "01")
            raise CodeFormatError(f"line {lineno}: illegal character {bad!r}")
        if width is None:
            width = len(bits)
        elif len(bits) != width:
            raise CodeFormatError(f"line {lineno}: ragged row at line {lineno}")
        for c, ch in enumerate(bits):
            if ch == "1":
                ones.append((nrows, c))
        nrows += 1
    if width is None:
        raise CodeFormatError("line 1: empty matrix")
    return ParityCheckMatrix(width, nrows, tuple(ones))


def serialize_dense(H: ParityCheckMatrix) -> str:
    dense = H.to_dense()
    return "\n".join(" ".join(str(int(x)) for x in row) for row in dense) + "\n"


def load_code(path: str, fmt: str = "alist") -> ParityCheckMatrix:
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    if fmt == "alist":
        return parse_alist(text)
    if fmt == "dense":
        return parse_dense(text)
    raise ValueError(f"unknown code format {fmt!r}")


def generate_gallager_code(
    n: int, wc: int, wr: int, seed: int = 0, max_restarts: int = 1000
) -> ParityCheckMatrix:
    """Pseudo-random regular code: every column weight wc, every row weight wr.

    Parameters
    ----------
    n : block length (columns).
    wc : column weight, at least 2.
    wr : row weight; n*wc must be divisible by wr.
    seed : any integer; the construction is deterministic given the seed.

    Each column contributes wc sockets; a seeded shuffle deals them into rows
    of wr sockets each.  A socket that would duplicate an edge inside its row
    is swapped with a random later socket, and in the rare case that no valid
    socket remains the whole deal is restarted with fresh randomness.
    """
    if wc < 2:
        raise ValueError("infeasible: column weight must be at least 2")
    if wr < 1 or (n * wc) % wr != 0:
        raise ValueError(f"infeasible: {n}*{wc} edges not divisible by row weight {wr}")
    m = n * wc // wr
    if wr > n or wc > m:
        raise ValueError("infeasible: node degree exceeds the opposite node count")

    state = derive_state(seed, n, wc, wr)
    for _ in range(max_restarts):
        sockets = [c for c in range(n) for _ in range(wc)]
        state = shuffle(sockets, state)
        ones = []
        ok = True
        pos = 0
        for row in range(m):
            row_cols: set[int] = set()
            for _ in range(wr):
                tries = 0
                while sockets[pos] in row_cols:
                    state, off = randrange(state, len(sockets) - pos)
                    j = pos + off
                    sockets[pos], sockets[j] = sockets[j], sockets[pos]
                    tries += 1
                    if tries > 100:
                        ok = False
                        break
                if not ok:
                    break
                row_cols.add(sockets[pos])
                ones.append((row, sockets[pos]))
                pos += 1
            if not ok:
                break
        if ok:
            return ParityCheckMatrix(n, m, tuple(ones))
    raise RuntimeError("could not place all edges without duplicates; parameters too tight")
