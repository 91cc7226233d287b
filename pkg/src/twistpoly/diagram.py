"""Data model and text format for twisted virtual graph diagrams.

A diagram is a set of nodes (graph vertices, classical crossings, virtual
crossings), a set of arcs joining node slots, and a set of free circle
components.  Slots at a node are numbered 0..d-1 in counterclockwise order.
Classical crossings always carry the over-strand on slots 1 and 3; virtual
crossings pass strands straight through (slot mates 0-2 and 1-3).  Arcs carry
a nonnegative count of half-twist bars.

The text format (.tgd) is line oriented:

    vertex NAME DEGREE
    crossing NAME
    virtual NAME
    arc NAME.SLOT NAME.SLOT [bars N]
    circle NAME [bars N]

with '#' comments and blank lines ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

VERTEX = "vertex"
CROSSING = "crossing"
VIRTUAL = "virtual"

NODE_KINDS = (VERTEX, CROSSING, VIRTUAL)

End = tuple[str, int]


class TgdError(ValueError):
    """Parse or validation failure, with a line number when available."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Node:
    kind: str
    degree: int

    def __post_init__(self):
        if self.kind not in NODE_KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if self.kind in (CROSSING, VIRTUAL) and self.degree != 4:
            raise ValueError(f"{self.kind} nodes have exactly 4 slots")
        if self.degree < 0:
            raise ValueError("negative degree")


@dataclass(frozen=True)
class Arc:
    end_a: End
    end_b: End
    bars: int = 0

    def __post_init__(self):
        if self.bars < 0:
            raise ValueError("negative bar count")

    def ends(self) -> tuple[End, End]:
        return (self.end_a, self.end_b)

    def other(self, end: End) -> End:
        if end == self.end_a:
            return self.end_b
        if end == self.end_b:
            return self.end_a
        raise ValueError(f"{end!r} is not an end of this arc")


@dataclass
class Diagram:
    """Immutable by convention; operations return new diagrams."""

    nodes: dict[str, Node] = field(default_factory=dict)
    arcs: dict[str, Arc] = field(default_factory=dict)
    circles: dict[str, int] = field(default_factory=dict)

    # ------------------------------------------------------------- queries

    def end_map(self) -> dict[End, str]:
        """Map each occupied (node, slot) to the arc id sitting there."""
        out: dict[End, str] = {}
        for aid, arc in self.arcs.items():
            out[arc.end_a] = aid
            out[arc.end_b] = aid
        return out

    def nodes_of_kind(self, kind: str) -> list[str]:
        return sorted(n for n, node in self.nodes.items() if node.kind == kind)

    def classical_crossings(self) -> list[str]:
        return self.nodes_of_kind(CROSSING)

    def is_pure(self) -> bool:
        return not any(n.kind == CROSSING for n in self.nodes.values())

    def stats(self) -> tuple[int, int, int, int, int]:
        """(num_classical, num_virtual, num_vertices, total_bars, num_circles)"""
        kinds = [n.kind for n in self.nodes.values()]
        total_bars = sum(a.bars for a in self.arcs.values()) + sum(self.circles.values())
        return (
            kinds.count(CROSSING),
            kinds.count(VIRTUAL),
            kinds.count(VERTEX),
            total_bars,
            len(self.circles),
        )

    def arcs_at(self, node_id: str) -> list[str]:
        """Arc ids incident to a node, one entry per endpoint, slot order."""
        degree = self.nodes[node_id].degree
        em = self.end_map()
        return [em[(node_id, s)] for s in range(degree) if (node_id, s) in em]

    def copy(self) -> "Diagram":
        return Diagram(dict(self.nodes), dict(self.arcs), dict(self.circles))


# ---------------------------------------------------------------- validation


def validate(d: Diagram) -> list[str]:
    """Return human-readable invariant violations; empty list means valid."""
    problems: list[str] = []
    seen: dict[End, str] = {}
    for aid, arc in sorted(d.arcs.items()):
        for end in arc.ends():
            node_id, slot = end
            node = d.nodes.get(node_id)
            if node is None:
                problems.append(f"arc {aid}: unknown node {node_id!r}")
                continue
            if not (0 <= slot < node.degree):
                problems.append(f"arc {aid}: slot {node_id}.{slot} out of range (degree {node.degree})")
                continue
            if end in seen:
                problems.append(f"arc {aid}: slot {node_id}.{slot} already used by arc {seen[end]}")
            else:
                seen[end] = aid
        if arc.bars < 0:
            problems.append(f"arc {aid}: negative bars")
    for nid, node in sorted(d.nodes.items()):
        for slot in range(node.degree):
            if (nid, slot) not in seen:
                problems.append(f"node {nid}: slot {slot} unused")
    for cid, bars in sorted(d.circles.items()):
        if bars < 0:
            problems.append(f"circle {cid}: negative bars")
        if cid in d.nodes:
            problems.append(f"circle {cid}: id collides with a node")
    return problems


# ------------------------------------------------------------------- parsing

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")
_END_RE = re.compile(r"^([A-Za-z0-9_]+)\.(\d+)$")


def _parse_end(token: str, line: int) -> End:
    m = _END_RE.match(token)
    if not m:
        raise TgdError(f"bad endpoint {token!r} (expected NAME.SLOT)", line)
    return (m.group(1), int(m.group(2)))


def _parse_bars(tokens: list[str], line: int) -> int:
    if not tokens:
        return 0
    if len(tokens) != 2 or tokens[0] != "bars":
        raise TgdError(f"trailing tokens {' '.join(tokens)!r}", line)
    try:
        bars = int(tokens[1])
    except ValueError:
        raise TgdError(f"bad bar count {tokens[1]!r}", line) from None
    if bars < 0:
        raise TgdError("bar count must be nonnegative", line)
    return bars


def parse_tgd(text: str) -> Diagram:
    """Parse the text format; raises TgdError on any syntax or invariant problem."""
    nodes: dict[str, Node] = {}
    arcs: dict[str, Arc] = {}
    circles: dict[str, int] = {}
    arc_n = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        decl, rest = tokens[0], tokens[1:]
        if decl in (VERTEX, CROSSING, VIRTUAL):
            if decl == VERTEX:
                if len(rest) != 2:
                    raise TgdError("expected: vertex NAME DEGREE", line_no)
                name, deg_tok = rest
                try:
                    degree = int(deg_tok)
                except ValueError:
                    raise TgdError(f"bad degree {deg_tok!r}", line_no) from None
                if degree < 0:
                    raise TgdError("degree must be nonnegative", line_no)
            else:
                if len(rest) != 1:
                    raise TgdError(f"expected: {decl} NAME", line_no)
                name, degree = rest[0], 4
            if not _NAME_RE.match(name):
                raise TgdError(f"bad name {name!r}", line_no)
            if name in nodes or name in circles:
                raise TgdError(f"duplicate id {name!r}", line_no)
            nodes[name] = Node(decl, degree)
        elif decl == "arc":
            if len(rest) < 2:
                raise TgdError("expected: arc NAME.SLOT NAME.SLOT [bars N]", line_no)
            end_a = _parse_end(rest[0], line_no)
            end_b = _parse_end(rest[1], line_no)
            if end_a == end_b:
                raise TgdError(f"arc endpoints coincide at {rest[0]}", line_no)
            bars = _parse_bars(rest[2:], line_no)
            if end_b < end_a:
                end_a, end_b = end_b, end_a
            arcs[f"a{arc_n}"] = Arc(end_a, end_b, bars)
            arc_n += 1
        elif decl == "circle":
            if not rest:
                raise TgdError("expected: circle NAME [bars N]", line_no)
            name = rest[0]
            if not _NAME_RE.match(name):
                raise TgdError(f"bad name {name!r}", line_no)
            if name in circles or name in nodes:
                raise TgdError(f"duplicate id {name!r}", line_no)
            circles[name] = _parse_bars(rest[1:], line_no)
        else:
            raise TgdError(f"unknown declaration {decl!r}", line_no)
    d = Diagram(nodes, arcs, circles)
    problems = validate(d)
    if problems:
        raise TgdError("; ".join(problems))
    return d


def serialize(d: Diagram) -> str:
    """Canonical text form: nodes by kind then id, arcs by endpoints, circles by id."""
    lines: list[str] = []
    for kind in NODE_KINDS:
        for nid in d.nodes_of_kind(kind):
            if kind == VERTEX:
                lines.append(f"vertex {nid} {d.nodes[nid].degree}")
            else:
                lines.append(f"{kind} {nid}")
    def arc_key(item):
        arc = item[1]
        return (min(arc.ends()), max(arc.ends()))
    for _, arc in sorted(d.arcs.items(), key=arc_key):
        lo, hi = sorted(arc.ends())
        suffix = f" bars {arc.bars}" if arc.bars else ""
        lines.append(f"arc {lo[0]}.{lo[1]} {hi[0]}.{hi[1]}{suffix}")
    for cid in sorted(d.circles):
        bars = d.circles[cid]
        suffix = f" bars {bars}" if bars else ""
        lines.append(f"circle {cid}{suffix}")
    return "\n".join(lines) + ("\n" if lines else "")


# ------------------------------------------------------------ splice engine


def fresh_ids(prefix: str, taken: Iterable[str]) -> "_FreshIds":
    return _FreshIds(prefix, set(taken))


class _FreshIds:
    def __init__(self, prefix: str, taken: set[str]):
        self.prefix = prefix
        self.taken = taken
        self.counter = 0

    def next(self) -> str:
        while True:
            candidate = f"{self.prefix}{self.counter}"
            self.counter += 1
            if candidate not in self.taken:
                self.taken.add(candidate)
                return candidate


def excise(d: Diagram, drop: Iterable[str], connectors: Mapping[End, End]) -> Diagram:
    """Remove the nodes in `drop` and re-route strands through `connectors`.

    `connectors` must be an involution on the dropped nodes' slots: each pair
    says the strand entering one slot leaves at the other.  Arc chains between
    surviving slots are concatenated into single arcs with summed bars; chains
    that close up become circle components.  This one function backs crossing
    smoothing, virtual erasure and every pattern-removing move rewrite.
    """
    dropped = set(drop)
    for nid in dropped:
        if nid not in d.nodes:
            raise ValueError(f"cannot drop unknown node {nid!r}")
    for end, mate in connectors.items():
        if end[0] not in dropped or mate[0] not in dropped:
            raise ValueError("connector endpoints must belong to dropped nodes")
        if connectors.get(mate) != end:
            raise ValueError("connectors must form an involution")

    end_map = d.end_map()
    new_nodes = {nid: node for nid, node in d.nodes.items() if nid not in dropped}
    new_arcs: dict[str, Arc] = {}
    new_circles = dict(d.circles)
    visited: set[str] = set()
    merged = fresh_ids("s", set(d.arcs))
    circle_ids = fresh_ids("c", set(d.circles) | set(new_nodes))

    def walk(start: End) -> tuple[End, int, list[str]]:
        """Follow the strand from a surviving end until the next surviving end."""
        bars = 0
        chain: list[str] = []
        cur = start
        while True:
            aid = end_map[cur]
            arc = d.arcs[aid]
            visited.add(aid)
            chain.append(aid)
            bars += arc.bars
            far = arc.other(cur)
            if far[0] not in dropped:
                return far, bars, chain
            cur = connectors[far]

    terminals = sorted(end for end in end_map if end[0] not in dropped)
    for start in terminals:
        if end_map[start] in visited:
            continue
        far, bars, chain = walk(start)
        lo, hi = sorted((start, far))
        aid = chain[0] if len(chain) == 1 else merged.next()
        new_arcs[aid] = Arc(lo, hi, bars)

    # anything left is a closed chain living entirely on dropped nodes
    for aid in sorted(d.arcs):
        if aid in visited:
            continue
        bars = 0
        start = d.arcs[aid].end_a
        cur = start
        while True:
            arc = d.arcs[end_map[cur]]
            visited.add(end_map[cur])
            bars += arc.bars
            cur = connectors[arc.other(cur)]
            if cur == start:
                break
        new_circles[circle_ids.next()] = bars

    return Diagram(new_nodes, new_arcs, new_circles)


# ----------------------------------------------------------------- surgery


def relabel(d: Diagram, rename: Mapping[str, str]) -> Diagram:
    """Rename node and circle ids; arc ids are untouched."""
    def r(x: str) -> str:
        return rename.get(x, x)
    nodes = {r(n): node for n, node in d.nodes.items()}
    arcs = {
        aid: Arc((r(a.end_a[0]), a.end_a[1]), (r(a.end_b[0]), a.end_b[1]), a.bars)
        for aid, a in d.arcs.items()
    }
    circles = {r(c): bars for c, bars in d.circles.items()}
    if len(nodes) != len(d.nodes) or len(circles) != len(d.circles):
        raise ValueError("relabel collision")
    return Diagram(nodes, arcs, circles)


def disjoint_union_with_map(d1: Diagram, d2: Diagram) -> tuple[Diagram, dict[str, str]]:
    """Side-by-side union; clashing ids in d2 get a fresh suffix.

    Returns the union and the id rename map applied to d2.
    """
    taken = set(d1.nodes) | set(d1.circles)
    rename: dict[str, str] = {}
    for old in list(d2.nodes) + list(d2.circles):
        if old in taken:
            k = 2
            while f"{old}_{k}" in taken or f"{old}_{k}" in d2.nodes or f"{old}_{k}" in d2.circles:
                k += 1
            rename[old] = f"{old}_{k}"
            taken.add(f"{old}_{k}")
        else:
            taken.add(old)
    d2r = relabel(d2, rename) if rename else d2
    nodes = dict(d1.nodes)
    nodes.update(d2r.nodes)
    circles = dict(d1.circles)
    circles.update(d2r.circles)
    arcs = dict(d1.arcs)
    fresh = fresh_ids("u", set(arcs))
    for aid, arc in d2r.arcs.items():
        if aid in arcs:
            arcs[fresh.next()] = arc
        else:
            arcs[aid] = arc
    return Diagram(nodes, arcs, circles), rename


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    return disjoint_union_with_map(d1, d2)[0]


def vertex_sum(d1: Diagram, v1: str, d2: Diagram, v2: str) -> Diagram:
    """One-point union: glue vertex v2 of d2 onto vertex v1 of d1.

    The merged vertex keeps v1's id; v2's rotation is appended after v1's,
    so slot j of v2 becomes slot degree(v1) + j.
    """
    if d1.nodes[v1].kind != VERTEX or d2.nodes[v2].kind != VERTEX:
        raise ValueError("vertex_sum needs graph vertices")
    u, rename = disjoint_union_with_map(d1, d2)
    v2u = rename.get(v2, v2)
    deg1 = u.nodes[v1].degree
    deg2 = u.nodes[v2u].degree
    nodes = dict(u.nodes)
    del nodes[v2u]
    nodes[v1] = Node(VERTEX, deg1 + deg2)
    arcs = {}
    for aid, arc in u.arcs.items():
        def move(end: End) -> End:
            if end[0] == v2u:
                return (v1, deg1 + end[1])
            return end
        ea, eb = sorted((move(arc.end_a), move(arc.end_b)))
        arcs[aid] = Arc(ea, eb, arc.bars)
    return Diagram(nodes, arcs, dict(u.circles))


def subdivide_arc(d: Diagram, arc_id: str) -> Diagram:
    """Insert a degree-2 vertex in the middle of an arc; bars stay on the first half."""
    arc = d.arcs[arc_id]
    fresh_v = fresh_ids("w", set(d.nodes) | set(d.circles)).next()
    nodes = dict(d.nodes)
    nodes[fresh_v] = Node(VERTEX, 2)
    arcs = dict(d.arcs)
    del arcs[arc_id]
    fresh_a = fresh_ids("s", set(arcs))
    lo, hi = sorted((arc.end_a, (fresh_v, 0)))
    arcs[fresh_a.next()] = Arc(lo, hi, arc.bars)
    lo, hi = sorted(((fresh_v, 1), arc.end_b))
    arcs[fresh_a.next()] = Arc(lo, hi, 0)
    return Diagram(nodes, arcs, dict(d.circles))


def _flip_vertex_with_bars(d: Diagram, v: str) -> Diagram:
    """Reverse a vertex rotation and add one bar at each incident arc end.

    Equivalence-preserving counterpart of pushing the vertex disk through a
    half twist; used by arc contraction when the contracted arc is twisted.
    """
    node = d.nodes[v]
    if node.kind != VERTEX:
        raise ValueError("can only flip graph vertices")
    deg = node.degree
    arcs = {}
    for aid, arc in d.arcs.items():
        ends = []
        extra = 0
        for end in arc.ends():
            if end[0] == v:
                ends.append((v, deg - 1 - end[1]))
                extra += 1
            else:
                ends.append(end)
        lo, hi = sorted(ends)
        arcs[aid] = Arc(lo, hi, arc.bars + extra)
    return Diagram(dict(d.nodes), arcs, dict(d.circles))


def contract_arc(d: Diagram, arc_id: str) -> Diagram:
    """Contract an arc joining two distinct vertices (merge them into one).

    Twisted arcs (odd bars) are handled by flipping one endpoint first; even
    bar counts are dropped (two half twists cancel).  The merged vertex keeps
    the first endpoint's id, with the second vertex's rotation spliced in at
    the contracted slot.
    """
    arc = d.arcs[arc_id]
    (u, su), (v, sv) = arc.ends()
    if u == v:
        raise ValueError("cannot contract a loop arc")
    if d.nodes[u].kind != VERTEX or d.nodes[v].kind != VERTEX:
        raise ValueError("contraction endpoints must be graph vertices")
    if arc.bars % 2:
        d = _flip_vertex_with_bars(d, v)
        arc = d.arcs[arc_id]
        if arc.end_a[0] == u:
            (u, su), (v, sv) = arc.end_a, arc.end_b
        else:
            (u, su), (v, sv) = arc.end_b, arc.end_a

    deg_u = d.nodes[u].degree
    deg_v = d.nodes[v].degree
    # new rotation: u's slots before su, then v's slots after sv (cyclic,
    # excluding sv), then u's slots after su
    slot_of: dict[End, int] = {}
    pos = 0
    for s in range(su):
        slot_of[(u, s)] = pos
        pos += 1
    for k in range(1, deg_v):
        slot_of[(v, (sv + k) % deg_v)] = pos
        pos += 1
    for s in range(su + 1, deg_u):
        slot_of[(u, s)] = pos
        pos += 1

    nodes = dict(d.nodes)
    del nodes[v]
    nodes[u] = Node(VERTEX, deg_u + deg_v - 2)
    arcs = {}
    for aid, a in d.arcs.items():
        if aid == arc_id:
            continue
        ends = []
        for end in a.ends():
            if end in slot_of:
                ends.append((u, slot_of[end]))
            else:
                ends.append(end)
        lo, hi = sorted(ends)
        arcs[aid] = Arc(lo, hi, a.bars)
    return Diagram(nodes, arcs, dict(d.circles))


def delete_arc(d: Diagram, arc_id: str) -> Diagram:
    """Delete an arc between vertices, compacting the slot numbering."""
    arc = d.arcs[arc_id]
    for node_id, _ in arc.ends():
        if d.nodes[node_id].kind != VERTEX:
            raise ValueError("deletion endpoints must be graph vertices")
    removed: dict[str, list[int]] = {}
    for node_id, slot in arc.ends():
        removed.setdefault(node_id, []).append(slot)
    nodes = dict(d.nodes)
    for node_id, slots in removed.items():
        nodes[node_id] = Node(VERTEX, nodes[node_id].degree - len(slots))
    arcs = {}
    for aid, a in d.arcs.items():
        if aid == arc_id:
            continue
        ends = []
        for end in a.ends():
            node_id, slot = end
            if node_id in removed:
                shift = sum(1 for gone in removed[node_id] if gone < slot)
                ends.append((node_id, slot - shift))
            else:
                ends.append(end)
        lo, hi = sorted(ends)
        arcs[aid] = Arc(lo, hi, a.bars)
    return Diagram(nodes, arcs, dict(d.circles))
