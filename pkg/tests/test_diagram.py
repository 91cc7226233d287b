import pytest

from twistpoly.diagram import (
    Arc,
    Diagram,
    Node,
    TgdError,
    contract_arc,
    delete_arc,
    disjoint_union,
    excise,
    parse_tgd,
    serialize,
    subdivide_arc,
    validate,
    vertex_sum,
)

LOOP = "vertex v 2\narc v.0 v.1\n"


def test_parse_loop():
    d = parse_tgd(LOOP)
    assert d.stats() == (0, 0, 1, 0, 0)
    assert len(d.arcs) == 1


def test_parse_circle_with_bars():
    d = parse_tgd("circle k bars 3")
    assert d.nodes == {}
    assert d.circles == {"k": 3}
    assert d.stats() == (0, 0, 0, 3, 1)


def test_parse_comments_and_blanks():
    d = parse_tgd("# a comment\n\nvertex v 0   # trailing\n")
    assert d.nodes["v"] == Node("vertex", 0)


def test_parse_crossing_and_virtual():
    d = parse_tgd(
        "crossing c\nvirtual x\n"
        "arc c.0 x.0\narc c.1 x.1\narc c.2 x.2\narc c.3 x.3\n"
    )
    assert d.stats() == (1, 1, 0, 0, 0)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("arc v.0 v.1", "unknown node"),
        ("vertex v 1\narc v.0 v.0", "coincide"),
        ("vertex v 2\narc v.0 v.5\narc v.1 v.0", "out of range"),
        ("vertex v 2\nvertex u 2\narc v.0 v.1\narc u.0 v.1\narc u.1 v.0", "already used"),
        ("vertex v 2\nvertex v 3", "duplicate"),
        ("vertex v 2\narc v.0 v.1\ncircle v", "duplicate"),
        ("vertex v 2", "unused"),
        ("vertex v -1", "nonnegative"),
        ("frob v 2", "unknown declaration"),
        ("vertex v 2\narc v.0 v.1 bars -2", "nonnegative"),
        ("vertex v 2\narc v.0 v.1 twist 2", "trailing"),
        ("vertex v two", "bad degree"),
        ("vertex v 2\narc v0 v.1", "bad endpoint"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(TgdError) as exc:
        parse_tgd(text)
    assert fragment in str(exc.value)


def test_parse_error_carries_line_number():
    with pytest.raises(TgdError) as exc:
        parse_tgd("vertex v 0\nbogus line here\n")
    assert exc.value.line == 2


def test_validate_reports_problems():
    d = Diagram(nodes={"v": Node("vertex", 2)}, arcs={"a0": Arc(("v", 0), ("w", 1))})
    problems = validate(d)
    assert any("unknown node" in p for p in problems)
    assert any("slot 1 unused" in p for p in problems)


def test_roundtrip_idempotent():
    text = (
        "vertex L 3\nvertex R 3\ncrossing q\nvirtual x\n"
        "arc L.0 q.1\narc q.3 x.0\narc x.2 R.0\narc L.1 q.0 bars 2\n"
        "arc q.2 x.1\narc x.3 R.1\narc L.2 R.2 bars 1\n"
        "circle k bars 4\n"
    )
    d = parse_tgd(text)
    once = serialize(d)
    again = serialize(parse_tgd(once))
    assert once == again
    d2 = parse_tgd(once)
    assert d2.stats() == d.stats()
    assert sorted(a.ends() for a in d2.arcs.values()) == sorted(a.ends() for a in d.arcs.values())


def test_serialize_empty():
    assert serialize(Diagram()) == ""


def test_stats_counts_bars_everywhere():
    d = parse_tgd("vertex v 2\narc v.0 v.1 bars 2\ncircle k bars 1\n")
    assert d.stats() == (0, 0, 1, 3, 1)


# --------------------------------------------------------------- excise


def smoothing_connectors(c, spin):
    if spin == 1:
        pairs = [(0, 1), (2, 3)]
    else:
        pairs = [(1, 2), (3, 0)]
    conn = {}
    for s, t in pairs:
        conn[(c, s)] = (c, t)
        conn[(c, t)] = (c, s)
    return conn


def test_excise_adjacent_loops_make_two_circles():
    d = parse_tgd("crossing c\narc c.0 c.1\narc c.2 c.3\n")
    out = excise(d, ["c"], smoothing_connectors("c", 1))
    assert out.nodes == {}
    assert out.arcs == {}
    assert len(out.circles) == 2


def test_excise_crossed_loops_make_one_circle():
    d = parse_tgd("crossing c\narc c.0 c.2 bars 1\narc c.1 c.3 bars 2\n")
    out = excise(d, ["c"], smoothing_connectors("c", 1))
    assert len(out.circles) == 1
    assert list(out.circles.values()) == [3]


def test_excise_chain_through_node():
    d = parse_tgd(
        "vertex v 2\ncrossing c\n"
        "arc v.0 c.0 bars 1\narc c.1 v.1 bars 2\narc c.2 c.3 bars 5\n"
    )
    out = excise(d, ["c"], smoothing_connectors("c", 1))
    assert set(out.nodes) == {"v"}
    assert len(out.arcs) == 1
    arc = next(iter(out.arcs.values()))
    assert sorted(arc.ends()) == [("v", 0), ("v", 1)]
    assert arc.bars == 3
    assert list(out.circles.values()) == [5]


def test_excise_untouched_arc_keeps_id():
    d = parse_tgd("vertex v 2\nvertex u 2\ncrossing c\narc v.0 u.0\narc v.1 c.0\narc u.1 c.1\narc c.2 c.3\n")
    em = d.end_map()
    keep_id = em[("v", 0)]
    out = excise(d, ["c"], smoothing_connectors("c", -1))
    assert keep_id in out.arcs
    assert out.arcs[keep_id].ends() == d.arcs[keep_id].ends()
    assert validate(out) == []


def test_excise_validates_connectors():
    d = parse_tgd("crossing c\narc c.0 c.1\narc c.2 c.3\n")
    with pytest.raises(ValueError):
        excise(d, ["c"], {("c", 0): ("c", 1)})
    with pytest.raises(ValueError):
        excise(d, ["missing"], {})


# --------------------------------------------------------------- surgery


def test_disjoint_union_renames_clashes():
    d1 = parse_tgd(LOOP)
    d2 = parse_tgd(LOOP)
    u = disjoint_union(d1, d2)
    assert len(u.nodes) == 2
    assert len(u.arcs) == 2
    assert validate(u) == []


def test_vertex_sum_merges_rotations():
    d1 = parse_tgd(LOOP)
    d2 = parse_tgd(LOOP)
    s = vertex_sum(d1, "v", d2, "v")
    assert len(s.nodes) == 1
    v = next(iter(s.nodes.values()))
    assert v.degree == 4
    assert validate(s) == []
    ends = sorted(end for a in s.arcs.values() for end in a.ends())
    assert [e[1] for e in ends] == [0, 1, 2, 3]


def test_subdivide_arc():
    d = parse_tgd(LOOP)
    out = subdivide_arc(d, next(iter(d.arcs)))
    assert len(out.nodes) == 2
    assert len(out.arcs) == 2
    assert validate(out) == []


def test_contract_path_edge():
    d = parse_tgd("vertex u 3\nvertex v 3\narc u.0 v.0\narc u.1 v.2\narc u.2 v.1\n")
    target = d.end_map()[("u", 0)]
    out = contract_arc(d, target)
    assert len(out.nodes) == 1
    merged = next(iter(out.nodes.values()))
    assert merged.degree == 4
    assert validate(out) == []


def test_contract_twisted_edge_flips_and_compensates():
    # one twisted edge between two vertices, plus a marker loop at v
    d = parse_tgd("vertex u 1\nvertex v 3\narc u.0 v.0 bars 1\narc v.1 v.2\n")
    target = d.end_map()[("u", 0)]
    out = contract_arc(d, target)
    assert validate(out) == []
    loop = next(iter(out.arcs.values()))
    # the loop at the flipped vertex picks up two bars, one per end
    assert loop.bars == 2


def test_contract_rejects_loop_arc():
    d = parse_tgd(LOOP)
    with pytest.raises(ValueError):
        contract_arc(d, next(iter(d.arcs)))


def test_delete_arc_renumbers_slots():
    d = parse_tgd("vertex u 3\nvertex v 3\narc u.0 v.0\narc u.1 v.2\narc u.2 v.1\n")
    target = d.end_map()[("u", 1)]
    out = delete_arc(d, target)
    assert validate(out) == []
    assert all(n.degree == 2 for n in out.nodes.values())
