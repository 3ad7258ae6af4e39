"""Device connectivity graphs with a three-layer edge coloring.

The bundled ``heavy-hex-127`` layout is the 127-qubit heavy-hexagon device
(vendor qubit numbering, so qubit 62 is the central qubit).  Edge colors
1, 2, 3 are the three layers of simultaneous two-qubit gates and are applied
in that order.

Layout files are line oriented::

    # comment
    qubits 4
    0 1 1
    1 2 2
    2 3 1

Lines with only two indices are uncolored; if every edge is uncolored a
greedy coloring is attempted.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

BUILTIN_LAYOUTS = {"heavy-hex-127": "heavy_hex_127.txt"}
NUM_COLORS = 3


class LayoutError(ValueError):
    """A layout file failed to parse or violates a layout invariant."""


@dataclass(frozen=True)
class DeviceLayout:
    num_qubits: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[int, ...]
    name: str = ""
    _adjacency: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        edges = tuple((min(a, b), max(a, b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        validate(self)
        adj: list[set[int]] = [set() for _ in range(self.num_qubits)]
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "_adjacency", tuple(tuple(sorted(s)) for s in adj))

    @property
    def coloring(self) -> dict[tuple[int, int], int]:
        return dict(zip(self.edges, self.colors))

    def neighbors(self, q: int) -> tuple[int, ...]:
        return self._adjacency[q]

    def edges_of_color(self, color: int, members=None) -> list[tuple[int, int]]:
        """Edges of one color in file order, optionally restricted to an induced subgraph."""
        out = []
        for e, c in zip(self.edges, self.colors):
            if c == color and (members is None or (e[0] in members and e[1] in members)):
                out.append(e)
        return out

    def induced_edges(self, members) -> list[tuple[int, int]]:
        return [e for e in self.edges if e[0] in members and e[1] in members]

    def to_text(self) -> str:
        lines = [f"qubits {self.num_qubits}"]
        lines += [f"{a} {b} {c}" for (a, b), c in zip(self.edges, self.colors)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class QubitSubset:
    members: frozenset[int]
    anchor: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if self.anchor not in self.members:
            raise ValueError(f"anchor {self.anchor} is not a member")

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)


def _is_connected(num_qubits, adjacency, nodes) -> bool:
    nodes = set(nodes)
    if not nodes:
        return True
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if w in nodes and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == nodes


def validate(layout: DeviceLayout) -> None:
    n = layout.num_qubits
    if n < 1:
        raise LayoutError("layout needs at least one qubit")
    if len(layout.colors) != len(layout.edges):
        raise LayoutError("every edge needs a color")
    if len(set(layout.edges)) != len(layout.edges):
        raise LayoutError("duplicate edge")
    adjacency: list[list[int]] = [[] for _ in range(n)]
    used: dict[tuple[int, int], tuple[int, int]] = {}
    for (a, b), c in zip(layout.edges, layout.colors):
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise LayoutError(f"invalid edge ({a}, {b}) for {n} qubits")
        if c not in range(1, NUM_COLORS + 1):
            raise LayoutError(f"edge ({a}, {b}) has color {c}, expected 1..{NUM_COLORS}")
        for q in (a, b):
            if (q, c) in used:
                raise LayoutError(
                    f"coloring is not a matching: edges {used[(q, c)]} and ({a}, {b}) "
                    f"share qubit {q} in color {c}")
            used[(q, c)] = (a, b)
        adjacency[a].append(b)
        adjacency[b].append(a)
    if max(len(x) for x in adjacency) > 3:
        raise LayoutError("max degree exceeds 3")
    if not _is_connected(n, adjacency, range(n)):
        raise LayoutError("graph is not connected")


def greedy_coloring(edges) -> list[int]:
    """Smallest free color per edge in the given order; raises if 3 colors do not suffice."""
    taken: dict[int, set[int]] = {}
    colors = []
    for a, b in edges:
        busy = taken.setdefault(a, set()) | taken.setdefault(b, set())
        free = [c for c in range(1, NUM_COLORS + 1) if c not in busy]
        if not free:
            raise LayoutError(f"greedy coloring needs more than {NUM_COLORS} colors at edge ({a}, {b})")
        colors.append(free[0])
        taken[a].add(free[0])
        taken[b].add(free[0])
    return colors


def parse_layout(text: str, name: str = "") -> DeviceLayout:
    num_qubits = None
    edges, colors = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "qubits":
            if len(parts) != 2 or not parts[1].isdigit():
                raise LayoutError(f"line {lineno}: bad header {raw!r}")
            num_qubits = int(parts[1])
            continue
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise LayoutError(f"line {lineno}: cannot parse {raw!r}") from None
        if len(vals) not in (2, 3):
            raise LayoutError(f"line {lineno}: expected '<q1> <q2> [<color>]'")
        edges.append((vals[0], vals[1]))
        colors.append(vals[2] if len(vals) == 3 else None)
    if num_qubits is None:
        raise LayoutError("missing 'qubits <N>' header")
    if edges and all(c is None for c in colors):
        colors = greedy_coloring(edges)
    elif any(c is None for c in colors):
        raise LayoutError("some edges are colored and some are not")
    return DeviceLayout(num_qubits, tuple(edges), tuple(colors), name=name)


def load_layout(source: str | os.PathLike = "heavy-hex-127") -> DeviceLayout:
    """Load a builtin layout by name or parse a layout file."""
    if isinstance(source, str) and source in BUILTIN_LAYOUTS:
        text = resources.files("appbench.data").joinpath(BUILTIN_LAYOUTS[source]).read_text()
        return parse_layout(text, name=source)
    try:
        with open(source) as f:
            text = f.read()
    except OSError as exc:
        raise LayoutError(f"cannot read layout {source!r}: {exc}") from exc
    return parse_layout(text, name=str(source))


def sample_connected_subset(layout: DeviceLayout, n: int, anchor: int,
                            rng: np.random.Generator) -> QubitSubset:
    """Grow a connected subset from ``anchor`` by adding uniform random frontier qubits.

    This is not uniform over all connected subsets of size ``n``.
    """
    if not 1 <= n <= layout.num_qubits:
        raise ValueError(f"subset size {n} outside 1..{layout.num_qubits}")
    if not 0 <= anchor < layout.num_qubits:
        raise ValueError(f"anchor {anchor} is not a qubit of the layout")
    members = {anchor}
    frontier = set(layout.neighbors(anchor))
    while len(members) < n:
        choices = sorted(frontier)
        q = choices[int(rng.integers(len(choices)))]
        members.add(q)
        frontier.discard(q)
        frontier.update(w for w in layout.neighbors(q) if w not in members)
    return QubitSubset(frozenset(members), anchor)


def lightcone_volume(circuit, obs) -> int:
    """Number of two-qubit gates in the backward lightcone of ``obs``.

    Gates are visited in reverse application order; a two-qubit gate touching
    the active set is counted and adds both qubits to it.
    """
    active = set(obs.support())
    if not active:
        return 0
    count = 0
    for layer in reversed(circuit.layers):
        for gate in reversed(layer.gates):
            if len(gate.qubits) == 2 and (gate.qubits[0] in active or gate.qubits[1] in active):
                count += 1
                active.update(gate.qubits)
    return count


def two_qubit_gate_count(circuit) -> int:
    return sum(1 for layer in circuit.layers for g in layer.gates if len(g.qubits) == 2)
