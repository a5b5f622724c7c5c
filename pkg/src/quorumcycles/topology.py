"""Network topology model: parsing, validation, and node relabelings.

Nodes are numbered 1..n.  Edges are undirected, stored canonically as
(u, v) with u < v.  Two on-disk formats are accepted: a plain text format

    # comment
    n 14
    1 2
    1 3

and a JSON object ``{"n": 14, "edges": [[1, 2], [1, 3]]}``.  Both parse to
the same Topology.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from importlib import resources

Edge = tuple[int, int]


class TopologyError(ValueError):
    """Malformed or invalid topology input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Topology:
    """Undirected simple graph on nodes 1..n."""

    n: int
    edges: tuple[Edge, ...]

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        # index 0 unused so adjacency[v] works with 1-based node ids
        neighbors: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        return tuple(tuple(sorted(ns)) for ns in neighbors)

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def _components(t: Topology) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for start in t.nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in t.adjacency[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(comp)
    return out


def validate(t: Topology) -> list[str]:
    """Return a list of human-readable violations (empty when valid)."""
    violations = []
    if t.n < 1:
        violations.append(f"node count must be positive, got {t.n}")
        return violations
    seen: set[Edge] = set()
    for u, v in t.edges:
        if u == v:
            violations.append(f"self-loop at node {u}")
            continue
        if not (1 <= u <= t.n and 1 <= v <= t.n):
            violations.append(f"edge ({u}, {v}) out of range 1..{t.n}")
            continue
        e = canonical_edge(u, v)
        if e in seen:
            violations.append(f"duplicate edge ({e[0]}, {e[1]})")
        seen.add(e)
    if not violations:
        comps = _components(t)
        if len(comps) > 1:
            smallest = min(comps, key=lambda c: (len(c), min(c)))
            violations.append(
                f"graph is disconnected ({len(comps)} components; "
                f"e.g. nodes {sorted(smallest)} are isolated from the rest)"
            )
    return violations


def _build(n: int, raw_edges: list[tuple[int, int]], lines: list[int] | None = None) -> Topology:
    """Canonicalize, validate, and construct; raises TopologyError."""
    canon = []
    seen: set[Edge] = set()
    for idx, (u, v) in enumerate(raw_edges):
        line = lines[idx] if lines else None
        if u == v:
            raise TopologyError(f"self-loop at node {u}", line)
        if not (1 <= u <= n and 1 <= v <= n):
            raise TopologyError(f"edge ({u}, {v}) out of range 1..{n}", line)
        e = canonical_edge(u, v)
        if e in seen:
            raise TopologyError(f"duplicate edge ({e[0]}, {e[1]})", line)
        seen.add(e)
        canon.append(e)
    t = Topology(n=n, edges=tuple(sorted(canon)))
    problems = validate(t)
    if problems:
        raise TopologyError("; ".join(problems))
    return t


def parse_topology(text: str) -> Topology:
    """Parse either the text or the JSON on-disk format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def _parse_json(text: str) -> Topology:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TopologyError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise TopologyError('JSON topology must be an object with "n" and "edges"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise TopologyError(f'"n" must be an integer, got {n!r}')
    raw = []
    for i, pair in enumerate(obj["edges"]):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2
                and all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
            raise TopologyError(f"edge #{i + 1} must be a pair of integers, got {pair!r}")
        raw.append((pair[0], pair[1]))
    return _build(n, raw)


def _parse_text(text: str) -> Topology:
    n: int | None = None
    raw: list[tuple[int, int]] = []
    lines: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        fields = content.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "n":
                raise TopologyError("expected header 'n <count>'", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise TopologyError(f"bad node count {fields[1]!r}", lineno) from None
            continue
        if len(fields) != 2:
            raise TopologyError(f"expected edge '<u> <v>', got {content!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise TopologyError(f"bad edge endpoints {content!r}", lineno) from None
        raw.append((u, v))
        lines.append(lineno)
    if n is None:
        raise TopologyError("missing header 'n <count>'")
    return _build(n, raw, lines)


def serialize_topology(t: Topology) -> str:
    out = [f"n {t.n}"]
    out.extend(f"{u} {v}" for u, v in t.edges)
    return "\n".join(out) + "\n"


def topology_to_json(t: Topology) -> str:
    return json.dumps({"n": t.n, "edges": [list(e) for e in t.edges]})


def load_topology(path: str) -> Topology:
    with open(path, encoding="utf-8") as fh:
        return parse_topology(fh.read())


BUNDLED = ("nsfnet", "arpanet", "american", "chinese")


def bundled_topology(name: str) -> Topology:
    """Load one of the packaged reference networks by short name."""
    if name not in BUNDLED:
        raise TopologyError(f"unknown bundled topology {name!r}; choose from {BUNDLED}")
    text = (resources.files(__package__) / "data" / f"{name}.txt").read_text("utf-8")
    return parse_topology(text)


def find_bridges(t: Topology) -> frozenset[Edge]:
    """Edges whose removal disconnects the graph (cycle routing blockers)."""
    disc = [0] * (t.n + 1)
    low = [0] * (t.n + 1)
    visited = [False] * (t.n + 1)
    bridges: set[Edge] = set()
    counter = 1
    for root in t.nodes:
        if visited[root]:
            continue
        # iterative DFS; recursion depth is unbounded on path-like graphs
        visited[root] = True
        disc[root] = low[root] = counter
        counter += 1
        stack: list[tuple[int, int, int]] = [(root, 0, 0)]  # (node, parent, next child idx)
        while stack:
            u, parent, i = stack.pop()
            if i < len(t.adjacency[u]):
                stack.append((u, parent, i + 1))
                w = t.adjacency[u][i]
                if not visited[w]:
                    visited[w] = True
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, u, 0))
                elif w != parent:
                    low[u] = min(low[u], disc[w])
            else:
                if parent:
                    low[parent] = min(low[parent], low[u])
                    if low[u] > disc[parent]:
                        bridges.add(canonical_edge(parent, u))
    return frozenset(bridges)


@dataclass(frozen=True)
class NodeMapping:
    """Bijective renumbering of 1..n; perm[i-1] is the image of node i."""

    perm: tuple[int, ...]
    seed: int

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError("perm must be a permutation of 1..n")

    @property
    def n(self) -> int:
        return len(self.perm)

    def apply(self, node: int) -> int:
        return self.perm[node - 1]

    @classmethod
    def identity(cls, n: int, seed: int = 0) -> "NodeMapping":
        return cls(perm=tuple(range(1, n + 1)), seed=seed)


def relabel(nodes: frozenset[int] | set[int], m: NodeMapping) -> frozenset[int]:
    return frozenset(m.apply(v) for v in nodes)


def generate_mappings(n: int, count: int, seed: int) -> list[NodeMapping]:
    """Deterministic mapping ensemble; the first mapping is the identity.

    The remaining count-1 mappings are uniform random permutations drawn
    from a single generator seeded with `seed`, so a longer ensemble with
    the same seed extends a shorter one.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    mappings = [NodeMapping.identity(n, seed=seed)]
    rng = random.Random(seed)
    for _ in range(count - 1):
        perm = list(range(1, n + 1))
        # Fisher-Yates, explicit so the stream is pinned to randrange only
        for i in range(n - 1, 0, -1):
            j = rng.randrange(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        mappings.append(NodeMapping(perm=tuple(perm), seed=seed))
    return mappings
