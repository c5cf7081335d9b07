import random

import pytest

from empg.core import GameStructure, GuardError, P1, P2
from empg.graph import (MooreStrategy, cycle_weight, enumerate_memoryless,
                        enumerate_simple_cycles, memoryless_strategy_count,
                        moore_minimize, peel_circulation, product,
                        product_restriction, reachable_set, reachable_subgraph,
                        sccs, shortest_path)
from empg.oracles import enumerate_simple_cycles_by_edges
from genutil import fig3_game, fig4_game, random_game


def test_reachable_subgraph_keeps_whole_strongly_connected_game():
    g = fig3_game()
    sub = reachable_subgraph(g, g.index_of["v0"])
    assert sub.n_vertices == 2 and sub.n_edges == 4


def test_reachable_subgraph_drops_unreachable():
    g = GameStructure(
        [("v0", P1), ("u", P1)],
        [("v0", "v0", (0, 0)), ("u", "u", (1, 1)), ("u", "v0", (0, 0))],
        "v0")
    sub = reachable_subgraph(g, g.index_of["v0"])
    assert sub.n_vertices == 1 and "u" not in sub.index_of


def test_reachable_chain():
    g = GameStructure([("v0", P1), ("v1", P1)],
                      [("v0", "v1", (0, 0)), ("v1", "v1", (0, 0))], "v0")
    sub = reachable_subgraph(g, 0)
    assert sub.n_vertices == 2


def test_sccs_fig3_single_component():
    g = fig3_game()
    dec = sccs(g)
    assert len(dec.components) == 1
    assert sorted(dec.components[0]) == [0, 1]


def test_sccs_one_way_bridge():
    g = GameStructure([("a", P1), ("b", P1)],
                      [("a", "a", (0, 0)), ("a", "b", (0, 0)), ("b", "b", (0, 0))])
    dec = sccs(g)
    assert len(dec.components) == 2
    assert not dec.same_component(0, 1)


def test_sccs_self_loop():
    g = GameStructure([("a", P1)], [("a", "a", (1, 2))])
    assert len(sccs(g).components) == 1


def test_product_memoryless_size():
    g = fig3_game()
    s = MooreStrategy.memoryless(g, P1, {0: 0, 1: 1})
    p = product(g, s)
    assert p.n_vertices == g.n_vertices


def test_product_fig4_self_loop_strategy():
    g = fig4_game()
    s = MooreStrategy.memoryless(g, P1, {g.index_of["v0"]: g.index_of["v0"],
                                         g.index_of["v1"]: g.index_of["v1"]})
    p = product(g, s)
    start = p.index_of["v0@m0"]
    reach = reachable_set(p, start)
    assert reach == {start}
    e = p.edge_between(start, start)
    assert e.weight.as_pair() == (1, -1)


def test_product_size_bound_three_states():
    g = fig3_game()
    states = ["a", "b", "c"]
    update = {(i, v): (i + 1) % 3 for i in range(3) for v in range(2)}
    next_move = {(i, v): v for i in range(3) for v in range(2)}
    s = MooreStrategy(g, P1, states, 0, update, next_move)
    p = product(g, s)
    assert p.n_vertices <= g.n_vertices * 3


def test_product_round_trip_consistency():
    # A random walk in product(g, s2) projects to a play consistent with
    # s2, and conversely a consistent play lifts into the product.
    rng = random.Random(5)
    for _ in range(30):
        g = random_game(rng, max_vertices=5)
        p2_vertices = g.vertices_of(P2)
        choice = {v: g.edges[g.out[v][rng.randrange(len(g.out[v]))]].dst for v in p2_vertices}
        s2 = MooreStrategy.memoryless(g, P2, choice)
        prod = product(g, s2)
        v = 0
        pv = prod.index_of[f"{g.ids[0]}@m0"]
        for _ in range(20):
            succ = prod.successors(pv)
            pv2 = rng.choice(succ)
            name = prod.ids[pv2]
            vid = name.split("@")[0]
            v2 = g.index_of[vid]
            assert g.edge_between(v, v2) is not None
            if g.owner[v] == P2:
                assert v2 == choice[v]
            v, pv = v2, pv2


def test_enumerate_simple_cycles_fig3():
    g = fig3_game()
    cycles = enumerate_simple_cycles(g)
    names = {tuple(g.ids[v] for v in c) for c in cycles}
    assert names == {("v0",), ("v1",), ("v0", "v1")}


def test_enumerate_simple_cycles_self_loop_only():
    g = GameStructure([("a", P1), ("b", P1)],
                      [("a", "b", (0, 0)), ("b", "b", (0, 0))])
    cycles = enumerate_simple_cycles(g)
    assert cycles == [(1,)]


def test_enumerate_simple_cycles_complete_digraph():
    names = ["a", "b", "c"]
    edges = [(u, v, (0, 0)) for u in names for v in names if u != v]
    g = GameStructure([(n, P1) for n in names], edges)
    cycles = enumerate_simple_cycles(g)
    assert len(cycles) == 5  # 3 two-cycles + 2 three-cycles
    edges_with_loops = edges + [(n, n, (0, 0)) for n in names]
    g2 = GameStructure([(n, P1) for n in names], edges_with_loops)
    assert len(enumerate_simple_cycles(g2)) == 8


def test_enumerate_simple_cycles_guards():
    names = [f"v{i}" for i in range(13)]
    edges = [(n, names[(i + 1) % 13], (0, 0)) for i, n in enumerate(names)]
    g = GameStructure([(n, P1) for n in names], edges)
    with pytest.raises(GuardError):
        enumerate_simple_cycles(g)


def test_cycle_enumerators_agree():
    rng = random.Random(9)
    for _ in range(40):
        g = random_game(rng, max_vertices=4, max_out=3)
        assert enumerate_simple_cycles(g) == enumerate_simple_cycles_by_edges(g)


def test_enumerate_memoryless_counts():
    g = GameStructure([("a", P1), ("b", P1)],
                      [("a", "a", (0, 0)), ("b", "b", (0, 0))])
    assert len(list(enumerate_memoryless(g, P2))) == 1  # no owned vertices

    g2 = GameStructure([("a", P2), ("b", P1), ("c", P1)],
                       [("a", "a", (0, 0)), ("a", "b", (0, 0)), ("a", "c", (0, 0)),
                        ("b", "b", (0, 0)), ("c", "c", (0, 0))])
    assert memoryless_strategy_count(g2, P2) == 3
    assert len(list(enumerate_memoryless(g2, P2))) == 3

    g3 = GameStructure([("a", P2), ("b", P2), ("c", P1)],
                       [("a", "a", (0, 0)), ("a", "b", (0, 0)),
                        ("b", "a", (0, 0)), ("b", "b", (0, 0)), ("b", "c", (0, 0)),
                        ("c", "c", (0, 0))])
    strategies = list(enumerate_memoryless(g3, P2))
    assert len(strategies) == 6
    signatures = {tuple(sorted(s.next_move.items())) for s in strategies}
    assert len(signatures) == 6  # each yielded exactly once


def test_enumerate_memoryless_guard():
    g = fig3_game()
    with pytest.raises(GuardError):
        list(enumerate_memoryless(g, P1, bound=1))


def test_product_restriction_prunes_antagonist_choices():
    g = GameStructure([("u", P2), ("v", P1)],
                      [("u", "u", (0, -1)), ("u", "v", (0, 0)), ("v", "v", (0, 1))],
                      "u")
    s2 = MooreStrategy.memoryless(g, P2, {0: 0})
    r = product_restriction(g, s2)
    assert r.n_edges == 2  # u keeps only its self-loop
    assert r.is_one_player()


def test_peel_circulation_two_loops():
    from fractions import Fraction
    g = fig4_game()
    loop0 = next(i for i, e in enumerate(g.edges) if e.src == e.dst == 0)
    loop1 = next(i for i, e in enumerate(g.edges) if e.src == e.dst == 1)
    flow = {loop0: Fraction(1, 2), loop1: Fraction(1, 2)}
    cycles = peel_circulation(g, flow)
    assert cycles == [((0,), 1), ((1,), 1)]


def test_peel_circulation_mixed_cycle():
    from fractions import Fraction
    g = fig3_game()
    e01 = next(i for i, e in enumerate(g.edges) if (e.src, e.dst) == (0, 1))
    e10 = next(i for i, e in enumerate(g.edges) if (e.src, e.dst) == (1, 0))
    loop0 = next(i for i, e in enumerate(g.edges) if e.src == e.dst == 0)
    flow = {e01: Fraction(1, 3), e10: Fraction(1, 3), loop0: Fraction(2, 3)}
    cycles = dict(peel_circulation(g, flow))
    assert cycles == {(0, 1): 1, (0,): 2}


def test_shortest_path_within_component():
    g = fig3_game()
    assert shortest_path(g, [0], [1]) == [0, 1]
    assert shortest_path(g, [1], [1]) == [1]
    g2 = GameStructure([("a", P1), ("b", P1)],
                       [("a", "a", (0, 0)), ("b", "b", (0, 0))])
    assert shortest_path(g2, [0], [1]) is None


def test_moore_minimize_collapses_redundant_memory():
    g = fig3_game()
    # Three states that all behave identically.
    update = {(i, v): (i + 1) % 3 for i in range(3) for v in range(2)}
    next_move = {(i, v): v for i in range(3) for v in range(2)}
    s = MooreStrategy(g, P1, ["a", "b", "c"], 0, update, next_move)
    m = moore_minimize(s)
    assert m.memory_size == 1

    # Two states with genuinely different moves survive.
    update2 = {(0, 0): 1, (1, 0): 0}
    next2 = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1}
    s2 = MooreStrategy(g, P1, ["a", "b"], 0, update2, next2)
    assert moore_minimize(s2).memory_size == 2


def test_moore_json_round_trip():
    g = fig3_game()
    s = MooreStrategy.memoryless(g, P1, {0: 1, 1: 0})
    doc = s.to_json_dict()
    s2 = MooreStrategy.from_json_dict(g, doc)
    assert s2.move(0, 0) == 1 and s2.move(0, 1) == 0
