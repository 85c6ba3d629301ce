"""Exact integer max-flow / min-cut with canonical extreme cuts.

The solver is Dinic's algorithm over adjacency lists with an iterative
blocking-flow search.  Capacities are Python integers, so there is no
overflow to detect: arithmetic is arbitrary precision and results are exact
at any magnitude.  Minimum cuts are reported as source-side node sets; the
minimal one is the set of nodes reachable from the source in the residual
graph and the maximal one is the complement of the nodes that still reach
the sink.  Every minimum cut's source side is sandwiched between the two.
"""

from __future__ import annotations

import operator
from collections import deque
from dataclasses import dataclass

from .core import ValidationError


@dataclass(frozen=True)
class FlowNetwork:
    """A directed s-t network with nonnegative integer capacities.

    Parallel arcs are merged additively and self-loops dropped at
    construction; arcs are stored sorted by endpoints.
    """

    node_count: int
    source: int
    sink: int
    arcs: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        n = int(self.node_count)
        s, t = int(self.source), int(self.sink)
        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "source", s)
        object.__setattr__(self, "sink", t)
        if n < 2:
            raise ValidationError("network needs at least source and sink")
        if not (0 <= s < n and 0 <= t < n):
            raise ValidationError("source/sink outside node range")
        if s == t:
            raise ValidationError("source and sink must differ")
        merged: dict[tuple[int, int], int] = {}
        for u, v, c in self.arcs:
            u, v = int(u), int(v)
            cap = operator.index(c)
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"arc ({u}, {v}) outside node range")
            if cap < 0:
                raise ValidationError(f"negative capacity on arc ({u}, {v})")
            if u == v:
                continue
            merged[u, v] = merged.get((u, v), 0) + cap
        object.__setattr__(
            self, "arcs", tuple((u, v, c) for (u, v), c in sorted(merged.items()))
        )


@dataclass(frozen=True)
class CutResult:
    """Max-flow certificate: value, minimal source side, per-arc flows.

    `flow` is aligned with the network's (merged, sorted) arc tuple.
    """

    flow_value: int
    source_side: frozenset[int]
    flow: tuple[int, ...]


class _Dinic:
    def __init__(self, net: FlowNetwork):
        self.net = net
        self.n = net.node_count
        # paired arcs: index a is a forward arc, a^1 its residual reverse
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v, c in net.arcs:
            self.adj[u].append(len(self.to))
            self.to.append(v)
            self.cap.append(c)
            self.adj[v].append(len(self.to))
            self.to.append(u)
            self.cap.append(0)
        self.flow_value = 0
        self.level: list[int] = []

    def _bfs(self) -> bool:
        to, cap, adj = self.to, self.cap, self.adj
        level = [-1] * self.n
        level[self.net.source] = 0
        queue = deque([self.net.source])
        while queue:
            u = queue.popleft()
            lu = level[u] + 1
            for a in adj[u]:
                v = to[a]
                if cap[a] > 0 and level[v] < 0:
                    level[v] = lu
                    queue.append(v)
        self.level = level
        return level[self.net.sink] >= 0

    def _blocking_flow(self) -> int:
        to, cap, adj, level = self.to, self.cap, self.adj, self.level
        s, t = self.net.source, self.net.sink
        it = [0] * self.n
        pushed = 0
        path: list[int] = []
        u = s
        while True:
            if u == t:
                bottleneck = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= bottleneck
                    cap[a ^ 1] += bottleneck
                pushed += bottleneck
                # retreat to just before the first saturated arc
                for pos, a in enumerate(path):
                    if cap[a] == 0:
                        del path[pos:]
                        break
                u = to[path[-1]] if path else s
                continue
            arcs_u = adj[u]
            advanced = False
            while it[u] < len(arcs_u):
                a = arcs_u[it[u]]
                v = to[a]
                if cap[a] > 0 and level[v] == level[u] + 1:
                    path.append(a)
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if advanced:
                continue
            if u == s:
                return pushed
            # dead end: prune u from the level graph and back up one arc
            level[u] = -1
            a = path.pop()
            u = to[a ^ 1]

    def solve(self) -> None:
        while self._bfs():
            self.flow_value += self._blocking_flow()

    def min_source_side(self) -> frozenset[int]:
        to, cap, adj = self.to, self.cap, self.adj
        seen = [False] * self.n
        seen[self.net.source] = True
        queue = deque([self.net.source])
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                v = to[a]
                if cap[a] > 0 and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return frozenset(i for i, hit in enumerate(seen) if hit)

    def max_source_side(self) -> frozenset[int]:
        # u reaches the sink iff some residual arc u->v leads to a reacher;
        # arc a in adj[v] points back at u = to[a], and a^1 is u->v.
        to, cap, adj = self.to, self.cap, self.adj
        reaches = [False] * self.n
        reaches[self.net.sink] = True
        queue = deque([self.net.sink])
        while queue:
            v = queue.popleft()
            for a in adj[v]:
                u = to[a]
                if cap[a ^ 1] > 0 and not reaches[u]:
                    reaches[u] = True
                    queue.append(u)
        return frozenset(i for i, hit in enumerate(reaches) if not hit)

    def arc_flows(self) -> tuple[int, ...]:
        return tuple(
            c - self.cap[2 * idx] for idx, (_, _, c) in enumerate(self.net.arcs)
        )


def max_flow(net: FlowNetwork) -> CutResult:
    """Solve the network exactly.

    The returned source side is the minimal minimum cut.
    """
    solver = _Dinic(net)
    solver.solve()
    return CutResult(
        flow_value=solver.flow_value,
        source_side=solver.min_source_side(),
        flow=solver.arc_flows(),
    )


def min_cut_extreme(net: FlowNetwork, side: str) -> frozenset[int]:
    """Source side of the minimal or maximal minimum cut.

    `side` is "minimal" or "maximal".  Both sets induce minimum cuts, and
    minimal is always contained in maximal.
    """
    if side not in ("minimal", "maximal"):
        raise ValidationError(f"side must be 'minimal' or 'maximal', got {side!r}")
    solver = _Dinic(net)
    solver.solve()
    if side == "minimal":
        return solver.min_source_side()
    return solver.max_source_side()


def cut_capacity(net: FlowNetwork, source_side) -> int:
    """Total capacity of arcs leaving `source_side`."""
    side = frozenset(source_side)
    if net.source not in side or net.sink in side:
        raise ValidationError("source side must contain source and not sink")
    return sum(c for u, v, c in net.arcs if u in side and v not in side)


def dump_network(net: FlowNetwork) -> str:
    """Plain-text form: header "nodes source sink", then one "u v cap" per arc."""
    lines = [f"{net.node_count} {net.source} {net.sink}"]
    lines.extend(f"{u} {v} {c}" for u, v, c in net.arcs)
    return "\n".join(lines) + "\n"


def load_network(text: str) -> FlowNetwork:
    """Parse the dump_network format."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 3:
        raise ValidationError("network dump needs a 'nodes source sink' header")
    try:
        n, s, t = (int(v) for v in rows[0])
        arcs = tuple((int(u), int(v), int(c)) for u, v, c in rows[1:])
    except ValueError as exc:
        raise ValidationError(f"malformed network dump: {exc}") from exc
    return FlowNetwork(node_count=n, source=s, sink=t, arcs=arcs)
