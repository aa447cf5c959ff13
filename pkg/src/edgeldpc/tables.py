"""Address-iterator tables for edge-level message passing.

Every edge of the Tanner graph gets one slot in six parallel arrays.  In the
variable orientation the edges are grouped by variable node; in the check
orientation they are regrouped by check node.  With both table sets in hand, a
message through edge k can be computed from plain array reads, without any
per-node adjacency structures:

    e  edge identity (variable orientation) / original edge index (check)
    v  variable node of the edge
    c  check node of the edge
    t  size of the group the edge belongs to
    s  first position of that group
    u  position of the edge inside its group, u[k] = k - s[k]

Variable-oriented groups enumerate a column's rows in descending row order;
check-oriented groups keep the original edge index ascending inside each row.
That pair of orders is what all golden-table tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckMatrix

VARIABLE = "variable"
CHECK = "check"


@dataclass(frozen=True)
class EdgeTables:
    """One orientation of the six per-edge iterator arrays."""

    orientation: str
    e: np.ndarray
    v: np.ndarray
    c: np.ndarray
    t: np.ndarray
    s: np.ndarray
    u: np.ndarray

    @property
    def total_edges(self) -> int:
        return len(self.e)


def _group_arrays(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """t, s, u over a non-decreasing group-key array."""
    size = len(keys)
    t = np.empty(size, dtype=np.int64)
    s = np.empty(size, dtype=np.int64)
    u = np.empty(size, dtype=np.int64)
    start = 0
    for k in range(1, size + 1):
        if k == size or keys[k] != keys[start]:
            t[start:k] = k - start
            s[start:k] = start
            u[start:k] = np.arange(k - start)
            start = k
    return t, s, u


def build_variable_tables(H: ParityCheckMatrix) -> EdgeTables:
    """Enumerate edges column by column (rows descending within a column)."""
    v_list: list[int] = []
    c_list: list[int] = []
    for col, rows in enumerate(H.col_rows()):
        for row in reversed(rows):
            v_list.append(col)
            c_list.append(row)
    v = np.array(v_list, dtype=np.int64)
    c = np.array(c_list, dtype=np.int64)
    t, s, u = _group_arrays(v)
    return EdgeTables(VARIABLE, np.arange(len(v), dtype=np.int64), v, c, t, s, u)


def build_check_tables(variable_tables: EdgeTables) -> EdgeTables:
    """Regroup a variable-oriented table set by check node.

    The stable sort keeps original edge indices ascending inside each check
    group; e carries the permutation back into canonical edge order.
    """
    if variable_tables.orientation != VARIABLE:
        raise ValueError("input must be variable-oriented tables")
    perm = np.argsort(variable_tables.c, kind="stable").astype(np.int64)
    c = variable_tables.c[perm]
    v = variable_tables.v[perm]
    t, s, u = _group_arrays(c)
    return EdgeTables(CHECK, perm, v, c, t, s, u)


@dataclass(frozen=True)
class CodeTables:
    """Both orientations plus the node/edge counts used all over the decoders."""

    variable: EdgeTables
    check: EdgeTables
    n: int
    m: int
    total_edges: int
    var_group_start: np.ndarray  # first edge of each variable's group
    var_group_size: np.ndarray

    @classmethod
    def from_matrix(cls, H: ParityCheckMatrix) -> "CodeTables":
        var = build_variable_tables(H)
        chk = build_check_tables(var)
        gstart = np.empty(H.n, dtype=np.int64)
        gsize = np.empty(H.n, dtype=np.int64)
        firsts = var.u == 0
        gstart[var.v[firsts]] = var.s[firsts]
        gsize[var.v[firsts]] = var.t[firsts]
        return cls(var, chk, H.n, H.m, var.total_edges, gstart, gsize)


def edge_set(tables: EdgeTables) -> set[tuple[int, int]]:
    """(row, col) pairs encoded by the tables; equals ones(H) for valid tables."""
    return set(zip(tables.c.tolist(), tables.v.tolist()))
