import random
from fractions import Fraction

import pytest

from empg.core import GameStructure, P1, Weight2
from empg.cycles import (CycleWitness, WitnessError, check_cycle_witness,
                         combine_coefficients, good_cycle_exists,
                         good_multicycle_exists, small_nonneg_coefficients,
                         witness_loop_counts, zero_multicycle_exists)
from empg.graph import cycle_weight, reachable_set, sccs
from empg.oracles import (oracle_good_cycle, oracle_good_multicycle,
                          oracle_good_multicycle_combination)
from genutil import fig3_game, fig4_game, random_game, random_one_player_game


def loop_game(*weights):
    """Chain of vertices, each with a self-loop of the given weight."""
    names = [f"v{i}" for i in range(len(weights))]
    edges = [(n, n, w) for n, w in zip(names, weights)]
    edges += [(names[i], names[i + 1], (0, 0)) for i in range(len(weights) - 1)]
    return GameStructure([(n, P1) for n in names], edges, "v0")


def test_zero_multicycle_fig4():
    g = fig4_game()
    flow = zero_multicycle_exists(g)
    assert flow is not None
    w1 = sum(v * g.edges[e].weight.w1 for e, v in flow.items())
    w2 = sum(v * g.edges[e].weight.w2 for e, v in flow.items())
    assert (w1, w2) == (0, 0)
    support = {(g.edges[e].src, g.edges[e].dst) for e in flow}
    assert support == {(0, 0), (1, 1)}


def test_zero_multicycle_positive_loop_none():
    assert zero_multicycle_exists(loop_game((1, 0))) is None


def test_zero_multicycle_zero_loop_some():
    flow = zero_multicycle_exists(loop_game((0, 0)))
    assert flow is not None and sum(flow.values()) == 1


def test_good_multicycle_fig4():
    g = fig4_game()
    wit = good_multicycle_exists(g, 0)
    assert wit is not None and wit.kind == "two-cycle"
    wc = cycle_weight(g, wit.cycle)
    wcp = cycle_weight(g, wit.cycle2)
    assert {wc, wcp} == {(-1, 1), (1, -1)}
    assert (wit.a, wit.b) == (1, 1)
    total = (wit.a * wc[0] + wit.b * wcp[0], wit.a * wc[1] + wit.b * wcp[1])
    assert total == (0, 0)


def test_good_multicycle_fig3():
    wit = good_multicycle_exists(fig3_game(), 0)
    assert wit is not None
    assert wit.kind == "two-cycle"
    g = fig3_game()
    total1 = wit.a * cycle_weight(g, wit.cycle)[0] + wit.b * cycle_weight(g, wit.cycle2)[0]
    total2 = wit.a * cycle_weight(g, wit.cycle)[1] + wit.b * cycle_weight(g, wit.cycle2)[1]
    assert total1 >= 0 and total2 >= 0


def test_good_multicycle_all_negative_none():
    assert good_multicycle_exists(loop_game((-1, -1)), 0) is None


def test_good_cycle_fig3_two_cycle_witness():
    g = fig3_game()
    wit = good_cycle_exists(g, 0)
    assert wit is not None and wit.kind == "two-cycle"
    assert cycle_weight(g, wit.cycle) == (-1, 3)
    assert cycle_weight(g, wit.cycle2) == (1, -1)
    x, y = 1, 3
    xp, yp = 1, 1
    assert xp * y - x * yp == 2 > 0
    assert (wit.a, wit.b) == (4, 10)
    check_cycle_witness(g, wit)


def test_good_cycle_fig4_none():
    assert good_cycle_exists(fig4_game(), 0) is None


def test_good_cycle_simple_self_loop():
    wit = good_cycle_exists(loop_game((0, 1)), 0)
    assert wit is not None and wit.kind == "simple"


def test_good_cycle_unreachable_scc_ignored():
    g = GameStructure(
        [("v0", P1), ("far", P1)],
        [("v0", "v0", (-1, -1)), ("far", "far", (0, 1)), ("far", "v0", (0, 0))],
        "v0")
    assert good_cycle_exists(g, g.index_of["v0"]) is None
    assert good_cycle_exists(g, g.index_of["far"]) is not None


def test_good_cycle_y_prime_zero_pair():
    # C = (-1, 2) self-loop, C' = (3, 0) two-cycle through the same SCC:
    # no simple good cycle, yet looping both yields (2, 2) > (0, 0).
    g = GameStructure(
        [("u", P1), ("a", P1)],
        [("u", "u", (-1, 2)), ("u", "a", (1, 0)), ("a", "u", (2, 0))],
        "u")
    wit = good_cycle_exists(g, 0)
    assert wit is not None and wit.kind == "two-cycle"
    assert oracle_good_cycle(g, 0)
    check_cycle_witness(g, wit)


def test_combine_coefficients_examples():
    assert combine_coefficients(Weight2(-1, 3), Weight2(1, -1)) == (4, 10)
    a, b = combine_coefficients(Weight2(-1, 2), Weight2(1, -1))
    assert (a, b) == (3, 5)
    assert (3 * -1 + 5 * 1, 3 * 2 + 5 * -1) == (2, 1)
    with pytest.raises(WitnessError, match="angle"):
        combine_coefficients(Weight2(-1, 1), Weight2(1, -1))


def test_small_nonneg_coefficients():
    assert small_nonneg_coefficients(Weight2(-1, 1), Weight2(1, -1)) == (1, 1)
    a, b = small_nonneg_coefficients(Weight2(-1, 3), Weight2(1, -1))
    assert a * -1 + b * 1 >= 0 and a * 3 + b * -1 >= 0


def test_witness_loop_counts_formula():
    wit = CycleWitness("two-cycle", (1,), (0,), 4, 10, (1, 0), (0, 1))
    assert witness_loop_counts(wit, 2, 3) == (48, 120)
    wit2 = CycleWitness("two-cycle", (0,), (0,), 1, 1, (0,), (0,))
    assert witness_loop_counts(wit2, 1, 1) == (2, 2)


def test_witness_loop_counts_composite_positive():
    g = fig3_game()
    wit = good_cycle_exists(g, 0)
    alpha, beta = witness_loop_counts(wit, g.n_vertices, g.max_abs_weight)
    assert (alpha, beta) == (48, 120)
    wc = cycle_weight(g, wit.cycle)
    wcp = cycle_weight(g, wit.cycle2)
    from empg.core import walk_weight
    conn1 = walk_weight(g, wit.path_c_cp)
    conn2 = walk_weight(g, wit.path_cp_c)
    total = (alpha * wc[0] + beta * wcp[0] + conn1[0] + conn2[0],
             alpha * wc[1] + beta * wcp[1] + conn1[1] + conn2[1])
    assert total == (72, 22)
    assert total[0] > 0 and total[1] > 0


def test_detectors_match_oracles_small_random():
    rng = random.Random(42)
    for _ in range(120):
        g = random_one_player_game(rng, max_vertices=5)
        v0 = 0
        lp_cycle = good_cycle_exists(g, v0) is not None
        lp_multi = good_multicycle_exists(g, v0) is not None
        assert lp_cycle == oracle_good_cycle(g, v0), g.to_json_dict()
        assert lp_multi == oracle_good_multicycle(g, v0), g.to_json_dict()
        if lp_cycle:
            assert lp_multi  # a good cycle is in particular a good multicycle


def test_multicycle_oracles_agree():
    rng = random.Random(43)
    for _ in range(50):
        g = random_one_player_game(rng, max_vertices=4, weight=2)
        assert oracle_good_multicycle(g, 0) == oracle_good_multicycle_combination(g, 0)


def test_returned_witnesses_satisfy_invariants():
    rng = random.Random(44)
    for _ in range(80):
        g = random_one_player_game(rng, max_vertices=5)
        wit = good_cycle_exists(g, 0)
        if wit is not None:
            check_cycle_witness(g, wit)
            if wit.kind == "two-cycle":
                dec = sccs(g)
                assert dec.same_component(wit.cycle[0], wit.cycle2[0])
                reach = reachable_set(g, 0)
                assert wit.cycle[0] in reach
        mwit = good_multicycle_exists(g, 0)
        if mwit is not None and mwit.kind == "two-cycle":
            wc = cycle_weight(g, mwit.cycle)
            wcp = cycle_weight(g, mwit.cycle2)
            assert mwit.a * wc[0] + mwit.b * wcp[0] >= 0
            assert mwit.a * wc[1] + mwit.b * wcp[1] >= 0


def test_self_loop_augmentation_per_scc():
    # Per reachable SCC: the detector agrees with the zero-multicycle test
    # on that SCC's subgraph augmented with down self-loops (-1,0), (0,-1).
    rng = random.Random(45)
    checked_sccs = 0
    checked_whole = 0
    for _ in range(60):
        g = random_one_player_game(rng, max_vertices=4)
        dec = sccs(g)
        reach = reachable_set(g, 0)
        per_scc_answers = []
        for ci, comp in enumerate(dec.components):
            if comp[0] not in reach or not dec.internal_edges(g, ci):
                per_scc_answers.append(False)
                continue
            aug = _augment_with_down_loops(g.induced(comp))
            per_scc_answers.append(zero_multicycle_exists(aug) is not None)
            checked_sccs += 1
        has_multi = good_multicycle_exists(g, 0) is not None
        assert has_multi == any(per_scc_answers)
        # When the reachable subgraph is one SCC the whole-graph form of
        # the augmentation equivalence holds verbatim.
        if len({dec.comp_of[v] for v in reach}) == 1:
            aug = _augment_with_down_loops(g.induced(reach))
            assert (zero_multicycle_exists(aug) is not None) == has_multi
            checked_whole += 1
    assert checked_sccs > 30 and checked_whole > 5


def _augment_with_down_loops(g: GameStructure) -> GameStructure:
    """Add self-loops (-1,0) and (0,-1) at every vertex, using a fresh
    midpoint vertex per loop to respect the one-edge-per-pair rule."""
    vertices = [(vid, P1) for vid in g.ids]
    edges = [(g.ids[e.src], g.ids[e.dst], e.weight.as_pair()) for e in g.edges]
    for vid in g.ids:
        for tag, w in (("a", (-1, 0)), ("b", (0, -1))):
            mid = f"{vid}.{tag}"
            vertices.append((mid, P1))
            edges.append((vid, mid, w))
            edges.append((mid, vid, (0, 0)))
    return GameStructure(vertices, edges)


def test_augmentation_counterexample_across_sccs():
    # Cycles (1,-1) and (-1,1) live in different reachable SCCs: their
    # union is a zero multicycle of the augmented reachable subgraph, yet
    # no single SCC carries a good multicycle.  The detector must say no.
    g = GameStructure(
        [("v0", P1), ("a", P1), ("b", P1)],
        [("v0", "a", (0, 0)), ("v0", "b", (0, 0)),
         ("a", "a", (1, -1)), ("b", "b", (-1, 1))],
        "v0")
    assert good_multicycle_exists(g, 0) is None
    assert not oracle_good_multicycle(g, 0)
    aug = _augment_with_down_loops(g.induced(reachable_set(g, 0)))
    assert zero_multicycle_exists(aug) is not None  # the literal whole-graph test is weaker


def test_monotonicity_adding_edge_never_flips_yes_to_no():
    rng = random.Random(46)
    flips = 0
    for _ in range(60):
        g = random_one_player_game(rng, max_vertices=4)
        before_cycle = good_cycle_exists(g, 0) is not None
        before_multi = good_multicycle_exists(g, 0) is not None
        # add a random new edge if a slot is free
        pairs = {(e.src, e.dst) for e in g.edges}
        free = [(u, v) for u in range(g.n_vertices) for v in range(g.n_vertices)
                if (u, v) not in pairs]
        if not free:
            continue
        u, v = free[rng.randrange(len(free))]
        edges = [(g.ids[e.src], g.ids[e.dst], e.weight.as_pair()) for e in g.edges]
        edges.append((g.ids[u], g.ids[v], (rng.randint(-3, 3), rng.randint(-3, 3))))
        g2 = GameStructure(list(zip(g.ids, g.owner)), edges, g.ids[0])
        if before_cycle:
            assert good_cycle_exists(g2, 0) is not None
        if before_multi:
            assert good_multicycle_exists(g2, 0) is not None
        flips += 1
    assert flips > 20
