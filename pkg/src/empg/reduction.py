"""Reduction from strict energy mean-payoff games to 4-dimensional energy
games, and the pull-back of protagonist strategies.

Every edge (v, v') with weight (x, y) is replaced by a five-edge gadget
through two fresh protagonist vertices r, s:

    (v, r): (x, y, -1, 1)    (r, s): (0, -1, 0, 0)    (s, s): (0, 0, 1, -1)
    (s, r): (0, 0, 0, 0)     (r, v'): (0, 0, 0, 0)

Dimensions 3 and 4 force the protagonist to balance s-loops against edge
traversals, and each s-excursion costs one unit of dimension 2, so the
4-dimensional unknown-initial-credit problem is equivalent to the strict
energy mean-payoff problem.  A winning finite-memory strategy in the
gadget game pulls back by running its Moore machine through the gadget
excursions it chooses itself and collapsing them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import EmpgError, GameStructure, P1
from .graph import MooreStrategy, moore_minimize
from .multienergy import MultiEnergyGame


class PullBackError(EmpgError):
    """The gadget strategy is not usable (e.g. loops in r/s forever)."""


@dataclass
class GadgetMap:
    """Correspondence between original edges and gadget vertices."""

    r_ids: list[str]  # per original edge index
    s_ids: list[str]
    edge_of_entry: dict[str, int]  # gadget r-vertex id -> original edge index

    def to_json_dict(self, g: GameStructure) -> dict:
        return {
            "edges": [{"from": g.ids[e.src], "to": g.ids[e.dst],
                       "r": self.r_ids[i], "s": self.s_ids[i]}
                      for i, e in enumerate(g.edges)],
        }


def to_energy4(g: GameStructure) -> tuple[MultiEnergyGame, GadgetMap]:
    """Build the 4-dimensional gadget game.

    |V'| = |V| + 2|E|, |E'| = 5|E|, and the largest absolute weight is
    preserved (the gadget's own entries are +-1; original games with all
    weights zero are the only case where the maximum grows to 1).
    """
    vertices = [(vid, own) for vid, own in zip(g.ids, g.owner)]
    r_ids = []
    s_ids = []
    edge_of_entry = {}
    edges = []
    for i, e in enumerate(g.edges):
        r = f"e{i}.r"
        s = f"e{i}.s"
        r_ids.append(r)
        s_ids.append(s)
        edge_of_entry[r] = i
        vertices.append((r, P1))
        vertices.append((s, P1))
        x, y = e.weight.as_pair()
        edges.append((g.ids[e.src], r, (x, y, -1, 1)))
        edges.append((r, s, (0, -1, 0, 0)))
        edges.append((s, s, (0, 0, 1, -1)))
        edges.append((s, r, (0, 0, 0, 0)))
        edges.append((r, g.ids[e.dst], (0, 0, 0, 0)))
    init = g.ids[g.initial] if g.initial is not None else None
    meg = MultiEnergyGame(vertices, edges, init)
    return meg, GadgetMap(r_ids, s_ids, edge_of_entry)


def pull_back_strategy(s_prime: MooreStrategy, g: GameStructure,
                       gmap: GadgetMap, v0: int) -> MooreStrategy:
    """Collapse a winning gadget strategy onto the original game.

    The pulled-back machine replays s_prime's own Moore machine over the
    deterministic r/s excursion between consecutive original vertices;
    its states are (s_prime state, last original vertex) pairs, then
    minimized.  For the vertex-aware machines produced by the fixpoint
    extraction the resulting memory never exceeds s_prime's.  Rejected if
    the gadget strategy would loop in r/s vertices forever, which no
    winning strategy can do.
    """
    meg: MultiEnergyGame = s_prime.game
    orig_index = {vid: meg.index_of[vid] for vid in g.ids}
    meg_to_orig = {mi: g.index_of[vid] for vid, mi in orig_index.items()}
    entry_edge = {meg.index_of[r]: e for r, e in gmap.edge_of_entry.items()}
    guard = 2 * s_prime.memory_size + 4

    def replay(m: int, edge_index: int) -> int:
        """Run s_prime through the excursion of one original edge; returns
        the machine state just before the edge's target."""
        target = orig_index[g.ids[g.edges[edge_index].dst]]
        cur = meg.index_of[gmap.r_ids[edge_index]]
        for _ in range(guard):
            nxt = s_prime.move(m, cur)
            m = s_prime.advance(m, cur)
            cur = nxt
            if cur in meg_to_orig:
                if cur != target:
                    raise PullBackError("gadget excursion exits to a foreign vertex")
                return m
        raise PullBackError("strategy loops forever in gadget vertices")

    # Pulled machine: state "pre" before anything is consumed, then one
    # state per (s_prime state after consuming x, x).
    labels = ["pre"]
    state_of: dict[tuple[int, int], int] = {}
    update: dict[tuple[int, int], int] = {}
    next_move: dict[tuple[int, int], int] = {}

    def intern(m: int, x: int) -> int:
        key = (m, x)
        if key not in state_of:
            state_of[key] = len(labels)
            labels.append(f"{s_prime.states[m]}&{g.ids[x]}")
        return state_of[key]

    def move_of(m_before: int, x: int) -> int:
        """Original move chosen at protagonist vertex x with machine state
        m_before (the state before consuming x)."""
        entry = s_prime.move(m_before, orig_index[g.ids[x]])
        e = entry_edge.get(entry)
        if e is None or g.edges[e].src != x:
            raise PullBackError(
                f"gadget strategy does not enter a gadget of {g.ids[x]!r}")
        return g.edges[e].dst

    # BFS over (pulled state, current original vertex, machine state
    # before that vertex); seeded at every vertex so the collapsed
    # machine is defined wherever the gadget strategy is, with the plan
    # initial vertex first for deterministic state numbering.
    seeds = [v0] + [v for v in range(g.n_vertices) if v != v0]
    queue = [(0, x, s_prime.initial) for x in reversed(seeds)]
    seen = {(0, x) for x in seeds}
    while queue:
        q, x, m_before = queue.pop()
        m_after = s_prime.advance(m_before, orig_index[g.ids[x]])
        if g.owner[x] == P1:
            y = move_of(m_before, x)
            next_move[(q, x)] = y
            targets = [y]
        else:
            targets = sorted(set(g.successors(x)))
        nq = intern(m_after, x)
        update[(q, x)] = nq
        for y in targets:
            e_idx = next(i for i in g.out[x] if g.edges[i].dst == y)
            m_before_y = replay(m_after, e_idx)
            if (nq, y) not in seen:
                seen.add((nq, y))
                queue.append((nq, y, m_before_y))

    # Queries no consistent play can make (wrong vertex for the state)
    # answer like the initial state; uniform junk entries let the
    # minimizer merge states that only differ off the consistent region.
    for q in range(len(labels)):
        for u in g.vertices_of(P1):
            if (q, u) not in next_move and (0, u) in next_move:
                next_move[(q, u)] = next_move[(0, u)]
    raw = MooreStrategy(g, P1, labels, 0, update, next_move)
    return moore_minimize(raw)
