import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from deepkw import (
    Attribute,
    KeywordQuery,
    Mode,
    Relation,
    Schema,
    d_graph,
    expanded_schema,
    is_connected_covering,
    join_graph,
    schema_join_graph,
    visible_relations,
)
from deepkw.core import make_tuple
from deepkw.graphs import UnionFind, components, visible_with_seeds

from cases import (
    BLOCKED_INPUT,
    CHAIN_INSTANCE,
    CHAIN_LABELS,
    CHAIN_SCHEMA,
    CYCLE,
    HIDDEN_BRIDGE,
    OPEN_CHAIN,
    STAFF_INSTANCE,
    STAFF_LABELS,
    STAFF_SCHEMA,
    load,
    query,
    schema,
)


def pick(instance, labels, *names):
    want = {labels[n] for n in names}
    return {t for t in instance if (t.relation, tuple(v.literal for v in t.values)) in want}


def test_join_graph_of_chain_reachable_portion():
    s, i = load(CHAIN_SCHEMA, CHAIN_INSTANCE)
    part = pick(i, CHAIN_LABELS, "t11", "t12", "t21", "t23", "t31", "t33")
    g = join_graph(part)
    label = {t: n for n in CHAIN_LABELS for t in pick(i, CHAIN_LABELS, n)}
    edges = {tuple(sorted(label[t] for t in e)) for e in g.edges}
    # Shared typed values: c1:A2 (t11, t21, t23, t31), c2:A1 (t12, t21, t31),
    # c6:A1 (t23, t33). c8 sits under A3 in t31 and A2 in t33, so no edge.
    assert edges == {
        ("t11", "t21"), ("t11", "t23"), ("t11", "t31"), ("t21", "t23"),
        ("t21", "t31"), ("t23", "t31"), ("t12", "t21"), ("t12", "t31"),
        ("t23", "t33"),
    }
    assert g.is_connected()


def test_disjoint_tuples_have_no_edges():
    r = Relation("r", (Attribute("a", "A"),))
    g = join_graph([make_tuple(r, ["x"]), make_tuple(r, ["y"])])
    assert len(g.nodes) == 2 and not g.edges
    assert not g.is_connected()


def test_connected_covering():
    s, i = load(STAFF_SCHEMA, STAFF_INSTANCE)
    q = query("IT:Dept, DBA:Role")
    assert is_connected_covering(pick(i, STAFF_LABELS, "t11", "t31"), q)
    assert not is_connected_covering(pick(i, STAFF_LABELS, "t11"), q)
    assert not is_connected_covering(set(), q)
    s, i = load(CHAIN_SCHEMA, CHAIN_INSTANCE)
    assert not is_connected_covering(pick(i, CHAIN_LABELS, "t11", "t33"), query("c1:A2, c8:A2"))


def test_schema_join_graph_staff():
    g = schema_join_graph(schema(STAFF_SCHEMA))
    assert g.edges == {("r1", "r2"), ("r1", "r3"), ("r2", "r3")}


def test_schema_join_graph_no_shared_domain():
    assert not schema_join_graph(schema("r1(A:A, B:B)\nr2(C:C, D:D)\n")).edges


def test_self_loop_and_unary_exclusion():
    s = schema("p(X:A, Y:A)\nu(Z:A)\n")
    assert ("p", "p") in schema_join_graph(s).edges
    assert schema_join_graph(s, exclude_unary=True).nodes == ("p",)


def test_expanded_schema_adds_keyword_relations():
    e = expanded_schema(schema(BLOCKED_INPUT), query("a:A, c:C"))
    kw = [r for r in e if r.name.startswith("__kw_")]
    assert sorted(r.attributes[0].domain for r in kw) == ["A", "C"]
    assert all(r.arity == 1 and not r.input_positions for r in kw)


def test_cycle_d_graph_arcs():
    g = d_graph(schema(CYCLE), query("a:A, c:C"))
    arcs = {(u.relation, u.domain, v.relation) for u, v in g.arcs}
    assert ("r", "B", "s") in arcs and ("s", "A", "r") in arcs
    assert ("__kw_0", "A", "r") in arcs
    assert all(v.mode is Mode.INPUT and u.mode is Mode.OUTPUT for u, v in g.arcs)


def test_visibility_verdicts():
    q = query("a:A, c:C")
    assert visible_relations(d_graph(schema(BLOCKED_INPUT), q)) == {"r"}
    assert visible_relations(d_graph(schema(OPEN_CHAIN), q)) == {"r", "s"}
    assert visible_relations(d_graph(schema(HIDDEN_BRIDGE), q)) == {"r", "s"}


def test_dot_is_deterministic():
    s = schema(STAFF_SCHEMA)
    text = schema_join_graph(s).to_dot()
    assert text == schema_join_graph(s).to_dot()
    assert text.startswith("graph schema_join_graph {")
    assert '"r1" -- "r2";' in text
    dg = d_graph(s, query("IT:Dept")).to_dot()
    assert '"r1.1:Emp^o" -> "r2.0:Emp^i";' in dg


def test_union_find_groups():
    uf = UnionFind(range(5))
    uf.union(0, 1)
    uf.union(3, 4)
    assert sorted(sorted(g) for g in uf.groups()) == [[0, 1], [2], [3, 4]]


# Visibility against an independent oracle: a relation is visible iff some
# ordering of relations lets each one's inputs be fed by keyword domains or
# outputs of relations placed before it.

domains = st.sampled_from("ABCD")


@st.composite
def small_schemas(draw):
    rels = []
    for n in range(draw(st.integers(1, 4))):
        attrs = draw(st.lists(st.tuples(domains, st.booleans()), min_size=1, max_size=3))
        rels.append(
            Relation(
                f"r{n}",
                tuple(Attribute(f"a{j}", d, Mode.INPUT if inp else Mode.OUTPUT) for j, (d, inp) in enumerate(attrs)),
            )
        )
    return Schema(tuple(rels))


def visible_by_orderings(s, seeds):
    seen = set()
    for order in itertools.permutations(list(s)):
        have = set(seeds)
        for r in order:
            if r.input_domains <= have:
                seen.add(r.name)
                have |= r.output_domains
            else:
                break
    return seen


@settings(max_examples=200, deadline=None)
@given(small_schemas(), st.sets(domains, min_size=1, max_size=2))
def test_visibility_matches_ordering_oracle(s, seeds):
    q = KeywordQuery.typed(*((f"k{d}", d) for d in sorted(seeds)))
    s = Schema(s.relations, catalog=frozenset("ABCD"))
    got = visible_relations(d_graph(s, q))
    assert got == visible_by_orderings(s, seeds)
    assert got == visible_with_seeds(s, seeds)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("xyz"), st.sampled_from("xyz")), max_size=6))
def test_components_agree_with_join_graph(pairs):
    r = Relation("r", (Attribute("a", "A"), Attribute("b", "A")))
    ts = {make_tuple(r, p) for p in pairs}
    assert (len(components(ts)) <= 1) == join_graph(ts).is_connected()
