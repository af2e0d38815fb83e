"""Acceptance gate: one test per criterion, each printed as PASS/FAIL in the
terminal summary."""

import time

import pytest

import test_properties as props
from deepkw import (
    KeywordQuery,
    answerable,
    compatible,
    extract,
    fresh_executor,
    optimal_answer,
    reachable_portion,
    visible_relations,
    d_graph,
)
from deepkw.formats import parse_constants

from cases import (
    BLOCKED_INPUT,
    CHAIN_INSTANCE,
    CHAIN_LABELS,
    CHAIN_SCHEMA,
    CYCLE,
    CYCLE_INSTANCE,
    FREE_FEED,
    FREE_FEED_INSTANCE,
    HIDDEN_BRIDGE,
    OPEN_CHAIN,
    SINGLE_HOP,
    STAFF_INSTANCE,
    STAFF_LABELS,
    STAFF_SCHEMA,
    TWO_ROUTES,
    as_pairs,
    labelled,
    load,
    query,
    schema,
)
from test_analysis import big_schema
from test_engine import test_no_plan_dominates


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.3f}s, limit {self.limit}s"


# 1. golden examples ------------------------------------------------------------


@pytest.mark.criterion("1.1", "reachable portion from c0 is {t11, t12, t21, t23, t31, t33}")
def test_golden_reachable_portion():
    with Timer(1.0):
        s, i = load(CHAIN_SCHEMA, CHAIN_INSTANCE)
        got = reachable_portion(s, fresh_executor(s, i), parse_constants("c0:A1"))
    assert as_pairs(got) == labelled(CHAIN_LABELS, "t11", "t12", "t21", "t23", "t31", "t33")


@pytest.mark.criterion("1.2", "optimal answer to {c1, c8} on the chain instance is {t11, t31}")
def test_golden_optimal_pair():
    # t31 = r3(c2, c1, c8) holds both keywords on its own, so the minimum
    # answer size is 1 and {t11, t31} is not minimal: this check fails.
    with Timer(1.0):
        s, i = load(CHAIN_SCHEMA, CHAIN_INSTANCE)
        got = optimal_answer(query("c1, c8"), s, fresh_executor(s, i))
    assert as_pairs(got) == labelled(CHAIN_LABELS, "t11", "t31")


@pytest.mark.criterion("1.3", "extract answers {IT, DBA} with {t11, t31}")
def test_golden_staff_extract():
    with Timer(1.0):
        s, i = load(STAFF_SCHEMA, STAFF_INSTANCE)
        res = extract(query("IT, DBA"), s, fresh_executor(s, i))
    assert as_pairs(res.answer) == labelled(STAFF_LABELS, "t11", "t31")


@pytest.mark.criterion("1.4", "compatibility table: S1 false, S2 true, S3 true, S4 false")
def test_golden_compatibility():
    with Timer(1.0):
        q1, q2 = query("a:A, c:C"), query("a:A, a2:A")
        got = (
            compatible(q1, schema("r1(A:A, B:B)\nr2(C:C, D:D)\n")),
            compatible(q1, schema("r1(A:A, B:B)\nr3(B:B, C:C)\n")),
            compatible(q2, schema("r1(A:A, B:B)\n")),
            compatible(q2, schema("r4(A:A)\n")),
        )
    assert got == (False, True, True, False)


@pytest.mark.criterion("1.5", "answerability and visibility verdicts for the three access-pattern schemas")
def test_golden_answerability():
    q = query("a:A, c:C")
    with Timer(1.0):
        verdicts = tuple(answerable(q, schema(t)) for t in (BLOCKED_INPUT, OPEN_CHAIN, HIDDEN_BRIDGE))
        vis = tuple(visible_relations(d_graph(schema(t), q)) for t in (BLOCKED_INPUT, OPEN_CHAIN, HIDDEN_BRIDGE))
    assert verdicts == (False, True, False)
    assert "s" not in vis[0]
    assert vis[1] == {"r", "s"}
    assert "u" not in vis[2]


@pytest.mark.criterion("1.6", "cycle instance: 4-tuple answer in exactly 4 accesses; optimal {s(b3,c,a)}")
def test_golden_cycle():
    with Timer(1.0):
        s, i = load(CYCLE, CYCLE_INSTANCE)
        ex = fresh_executor(s, i)
        res = extract(query("a:A, c:C"), s, ex)
        best = optimal_answer(query("a:A, c:C"), s, fresh_executor(s, i))
    assert res.answer.lines() == ["r(a, b1)", "r(a1, b2)", "s(b1, c1, a1)", "s(b2, c, a2)"]
    assert ex.total == 4
    assert best.lines() == ["s(b3, c, a)"]


# 2. access-count bounds --------------------------------------------------------


@pytest.mark.criterion("2.1", "single-keyword instance family: exactly 1 access")
def test_bound_single_access():
    with Timer(1.0):
        for inst in ("", "r(a, b)\n", "r(a, b)\nr(a, b2)\ns(b, c)\n", "r(x, y)\ns(y, z)\n"):
            s, i = load(SINGLE_HOP, inst)
            ex = fresh_executor(s, i)
            extract(query("a:A"), s, ex)
            assert ex.total == 1


@pytest.mark.criterion("2.2", "two-route worst case (r empty): accesses <= 2 + |s|")
def test_bound_two_routes():
    with Timer(1.0):
        for n in range(1, 6):
            for hit in (False, True):
                rows = [f"s(c{j})" for j in range(n)] + ([f"u(c{n - 1}, a)"] if hit else [])
                s, i = load(TWO_ROUTES, "\n".join(rows) + "\n")
                ex = fresh_executor(s, i)
                assert extract(query("a:A"), s, ex).found == hit
                assert ex.total <= 2 + n


@pytest.mark.criterion("2.3", "forced chain worst case: accesses <= 1 + |pi_B(sigma_A=a(r))|")
def test_bound_forced_chain():
    with Timer(1.0):
        for n in range(1, 6):
            for hit in (False, True):
                rows = [f"r(a, b{j})" for j in range(n)] + [f"r(z, y{j})" for j in range(3)]
                rows += [f"s(b{j}, x)" for j in range(n)] + ([f"s(b{n - 1}, c)"] if hit else [])
                s, i = load(SINGLE_HOP, "\n".join(rows) + "\n")
                ex = fresh_executor(s, i)
                assert extract(query("a:A, c:C"), s, ex).found == hit
                assert ex.total <= 1 + n


@pytest.mark.criterion("2.4", "free-feed instance: accesses <= 4 and equal to the derived 1 + 2 trace")
def test_bound_free_feed():
    with Timer(1.0):
        s, i = load(FREE_FEED, FREE_FEED_INSTANCE)
        ex = fresh_executor(s, i)
        res = extract(query("a:A, c:C"), s, ex)
    assert res.found
    assert ex.total <= 4
    assert ex.stats().per_relation == {"r": 1, "s": 2}


# 3. property suites ------------------------------------------------------------

_PROPERTY_TIME = []


def _timed(fn):
    start = time.perf_counter()
    fn()
    _PROPERTY_TIME.append(time.perf_counter() - start)


@pytest.mark.criterion("3.1", "peel validity")
def test_prop_peel():
    _timed(props.test_peel_validity)


@pytest.mark.criterion("3.2", "existence equivalence of extract and optimal_answer")
def test_prop_existence():
    _timed(props.test_existence_equivalence_and_size)


@pytest.mark.criterion("3.3", "not answerable => no answer and 0 accesses")
def test_prop_soundness():
    _timed(props.test_not_answerable_means_no_access)


@pytest.mark.criterion("3.4", "answerable => constructed instance yields an answer")
def test_prop_completeness():
    _timed(props.test_answerable_means_some_instance_answers)


@pytest.mark.criterion("3.5", "baseline dominance: extract accesses <= reachable-portion accesses")
def test_prop_baseline():
    _timed(props.test_baseline_dominance)


@pytest.mark.criterion("3.6", "no-domination pair: each plan strictly wins on one instance")
def test_prop_no_domination():
    _timed(test_no_plan_dominates)


@pytest.mark.criterion("3.7", "cache equivalence")
def test_prop_cache():
    _timed(props.test_cache_equivalence)


@pytest.mark.criterion("3.8", "property suites run in under 60s total")
def test_prop_total_time():
    assert len(_PROPERTY_TIME) == 7
    assert sum(_PROPERTY_TIME) < 60


# 4. speed of the static checks -------------------------------------------------


@pytest.mark.criterion("4", "compatible and answerable under 100ms on 50 relations / 20 domains")
def test_static_checks_fast():
    s = big_schema()
    for kws in ((("x", "D0"), ("y", "D7")), (("x", "D0"), ("y", "D7"), ("z", "D13")), (("x", "D3"),)):
        q = KeywordQuery.typed(*kws)
        with Timer(0.1):
            compatible(q, s)
            answerable(q, s)
