"""Exact transportation feasibility via integer maximum flow.

Row and column marginals are exact rationals (or naturals); denominators are
cleared with their least common multiple and the resulting integer problem is
solved with breadth-first augmenting paths.  Instances here are tiny (a
handful of sources and sinks), so simplicity beats asymptotics.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm
from typing import Mapping, Optional

from .values import _skey


def _max_flow(n: int, capacity: dict, source: int, sink: int) -> dict:
    """Edmonds-Karp on an adjacency-dict graph; mutates nothing, returns flows."""
    residual = {}
    adj = {i: set() for i in range(n)}
    for (a, b), cap in capacity.items():
        residual[(a, b)] = residual.get((a, b), 0) + cap
        residual.setdefault((b, a), 0)
        adj[a].add(b)
        adj[b].add(a)
    flow = {edge: 0 for edge in capacity}
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            node = queue.popleft()
            for nxt in sorted(adj[node]):
                if nxt not in parent and residual.get((node, nxt), 0) > 0:
                    parent[nxt] = node
                    queue.append(nxt)
        if sink not in parent:
            return flow
        path = []
        node = sink
        while parent[node] is not None:
            path.append((parent[node], node))
            node = parent[node]
        push = min(residual[e] for e in path)
        for e in path:
            residual[e] -= push
            residual[(e[1], e[0])] += push
            if e in flow:
                flow[e] += push
            else:
                flow[(e[1], e[0])] -= push


def feasible_transport(
    rows: Mapping, cols: Mapping, cells
) -> Optional[dict]:
    """A nonnegative filling of the allowed cells with the given marginals.

    Returns {cell: amount} using exact rationals (zero-amount cells omitted),
    or None when no filling exists.  Rows and columns with zero marginal are
    ignored; totals must agree, otherwise the problem is trivially infeasible.
    """
    rows = {k: Fraction(v) for k, v in rows.items() if v}
    cols = {k: Fraction(v) for k, v in cols.items() if v}
    if sum(rows.values(), Fraction(0)) != sum(cols.values(), Fraction(0)):
        return None
    denom = lcm(
        *[v.denominator for v in rows.values()],
        *[v.denominator for v in cols.values()],
        1,
    )
    row_keys = sorted(rows, key=_skey)
    col_keys = sorted(cols, key=_skey)
    row_id = {k: 1 + i for i, k in enumerate(row_keys)}
    col_id = {k: 1 + len(row_keys) + i for i, k in enumerate(col_keys)}
    n = 2 + len(row_keys) + len(col_keys)
    source, sink = 0, n - 1
    capacity = {}
    total = 0
    for k in row_keys:
        amount = int(rows[k] * denom)
        capacity[(source, row_id[k])] = amount
        total += amount
    for k in col_keys:
        capacity[(col_id[k], sink)] = int(cols[k] * denom)
    usable = False
    for r, c in sorted(cells, key=_skey):
        if r in row_id and c in col_id:
            capacity[(row_id[r], col_id[c])] = total
            usable = True
    if total == 0:
        return {}
    if not usable:
        return None
    flow = _max_flow(n, capacity, source, sink)
    shipped = sum(flow[(source, row_id[k])] for k in row_keys)
    if shipped != total:
        return None
    out = {}
    for r in row_keys:
        for c in col_keys:
            edge = (row_id[r], col_id[c])
            if flow.get(edge, 0):
                out[(r, c)] = Fraction(flow[edge], denom)
    return out
