"""Structural graph algorithms and finite-memory strategies.

Reachability, strongly connected components (iterative Tarjan), products
of a game with a Moore machine, simple-cycle and memoryless-strategy
enumeration used as desk-scale oracles, and circulation peeling shared by
the cycle detectors.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

from .core import P1, P2, Edge, GameStructure, GuardError

ENUMERATION_GUARD = 10 ** 6


def reachable_set(g: GameStructure, v0: int) -> frozenset[int]:
    seen = {v0}
    stack = [v0]
    while stack:
        v = stack.pop()
        for i in g.out[v]:
            d = g.edges[i].dst
            if d not in seen:
                seen.add(d)
                stack.append(d)
    return frozenset(seen)


def reachable_subgraph(g: GameStructure, v0: int) -> GameStructure:
    """Induced subgame on the vertices reachable from ``v0``.

    Every successor of a reachable vertex is itself reachable, so no
    retained vertex can lose its outgoing edges.
    """
    return g.induced(reachable_set(g, v0))


class SccDecomposition:
    """Partition of the vertex set into strongly connected components."""

    def __init__(self, components: list[list[int]], comp_of: list[int]):
        self.components = components
        self.comp_of = comp_of

    def same_component(self, u: int, v: int) -> bool:
        return self.comp_of[u] == self.comp_of[v]

    def internal_edges(self, g: GameStructure, comp_index: int) -> list[int]:
        """Edge indices with both endpoints inside the component."""
        return [i for i, e in enumerate(g.edges)
                if self.comp_of[e.src] == comp_index and self.comp_of[e.dst] == comp_index]


def sccs(g: GameStructure) -> SccDecomposition:
    """Tarjan's algorithm, iterative to avoid recursion limits."""
    n = g.n_vertices
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            out = g.out[v]
            while ei < len(out):
                w = g.edges[out[ei]].dst
                ei += 1
                if index[w] == -1:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(components)
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                components.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return SccDecomposition(components, comp_of)


class MooreStrategy:
    """Finite-memory strategy encoded by a deterministic Moore machine.

    ``update`` maps (memory state, consumed vertex) to the next memory
    state; ``next_move`` maps (memory state, owned vertex) to the chosen
    successor.  The maps may be partial: undefined updates keep the state,
    an undefined next move falls back to the lexicographically first
    successor.  Memory size is the number of states.
    """

    def __init__(self, game: GameStructure, player: int, states: Sequence[str],
                 initial: int, update: dict[tuple[int, int], int],
                 next_move: dict[tuple[int, int], int]):
        self.game = game
        self.player = player
        self.states = tuple(states)
        self.initial = initial
        self.update = dict(update)
        self.next_move = dict(next_move)

    @property
    def memory_size(self) -> int:
        return len(self.states)

    def advance(self, m: int, v: int) -> int:
        return self.update.get((m, v), m)

    def move(self, m: int, v: int) -> int:
        mv = self.next_move.get((m, v))
        if mv is None:
            mv = min(self.game.successors(v))
        return mv

    @classmethod
    def memoryless(cls, game: GameStructure, player: int,
                   choice: dict[int, int]) -> "MooreStrategy":
        next_move = {(0, v): t for v, t in choice.items()}
        return cls(game, player, ["m0"], 0, {}, next_move)

    def to_json_dict(self) -> dict:
        ids = self.game.ids
        return {
            "kind": "moore",
            "player": self.player,
            "states": list(self.states),
            "initial": self.states[self.initial],
            "update": [{"state": self.states[m], "vertex": ids[v], "next": self.states[n]}
                       for (m, v), n in sorted(self.update.items())],
            "next_move": [{"state": self.states[m], "vertex": ids[v], "to": ids[t]}
                          for (m, v), t in sorted(self.next_move.items())],
        }

    @classmethod
    def from_json_dict(cls, game: GameStructure, doc: dict) -> "MooreStrategy":
        states = list(doc["states"])
        sindex = {s: i for i, s in enumerate(states)}
        update = {(sindex[item["state"]], game.index_of[item["vertex"]]): sindex[item["next"]]
                  for item in doc["update"]}
        next_move = {(sindex[item["state"]], game.index_of[item["vertex"]]): game.index_of[item["to"]]
                     for item in doc["next_move"]}
        return cls(game, doc["player"], states, sindex[doc["initial"]], update, next_move)


def moore_minimize(s: MooreStrategy) -> MooreStrategy:
    """Merge behaviorally equivalent memory states (partition refinement).

    States are compared on next-move outputs for every vertex of the
    owning player and refined on update targets over the full alphabet,
    starting from the states reachable from the initial one.
    """
    g = s.game
    owned = g.vertices_of(s.player)
    alphabet = list(range(g.n_vertices))

    reachable = {s.initial}
    frontier = [s.initial]
    while frontier:
        m = frontier.pop()
        for v in alphabet:
            n = s.advance(m, v)
            if n not in reachable:
                reachable.add(n)
                frontier.append(n)
    order = sorted(reachable)

    signatures = {m: tuple(s.move(m, v) for v in owned) for m in order}
    blocks: dict[tuple, list[int]] = {}
    for m in order:
        blocks.setdefault(signatures[m], []).append(m)
    block_of = {}
    for bi, key in enumerate(sorted(blocks)):
        for m in blocks[key]:
            block_of[m] = bi

    while True:
        refined: dict[tuple, list[int]] = {}
        for m in order:
            key = (block_of[m],) + tuple(block_of[s.advance(m, v)] for v in alphabet)
            refined.setdefault(key, []).append(m)
        if len(refined) == len(set(block_of.values())):
            break
        block_of = {}
        for bi, key in enumerate(sorted(refined)):
            for m in refined[key]:
                block_of[m] = bi

    n_blocks = len(set(block_of.values()))
    if n_blocks == len(order) and order == list(range(s.memory_size)):
        return s
    rep = {}
    for m in order:
        rep.setdefault(block_of[m], m)
    names = [f"m{b}" for b in range(n_blocks)]
    update = {}
    next_move = {}
    for b, m in rep.items():
        for v in alphabet:
            n = s.advance(m, v)
            if block_of[n] != b:
                update[(b, v)] = block_of[n]
        for v in owned:
            next_move[(b, v)] = s.move(m, v)
    return MooreStrategy(g, s.player, names, block_of[s.initial], update, next_move)


def product(g: GameStructure, s: MooreStrategy) -> GameStructure:
    """Product of the game with the strategy's Moore machine.

    Vertices are (vertex, memory) pairs with ids ``"v@m"``.  At vertices
    owned by the strategy's player only the chosen edge survives, so plays
    from ``(v0, m0)`` are exactly the plays consistent with the strategy.
    """
    pairs = [(v, m) for v in range(g.n_vertices) for m in range(s.memory_size)]
    pid = {vm: f"{g.ids[vm[0]]}@{s.states[vm[1]]}" for vm in pairs}
    vertices = [(pid[vm], g.owner[vm[0]]) for vm in pairs]
    edges = []
    for v, m in pairs:
        m2 = s.advance(m, v)
        if g.owner[v] == s.player:
            targets = [s.move(m, v)]
        else:
            targets = g.successors(v)
        for t in targets:
            e = g.edge_between(v, t)
            if e is None:
                raise ValueError(f"strategy picks non-successor {g.ids[t]!r} at {g.ids[v]!r}")
            edges.append((pid[(v, m)], pid[(t, m2)], e.weight.as_pair()))
    init = None
    if g.initial is not None:
        init = pid[(g.initial, s.initial)]
    return GameStructure(vertices, edges, init)


def product_restriction(g: GameStructure, s2: MooreStrategy) -> GameStructure:
    """One-player view of ``product(g, s2)`` for a memoryless antagonist.

    For memory size one the product collapses onto the original vertex
    set: antagonist vertices keep only the chosen edge and every vertex is
    handed to player 1.
    """
    if s2.memory_size != 1:
        raise ValueError("product_restriction requires a memoryless strategy")
    drop = []
    for v in g.vertices_of(s2.player):
        chosen = s2.move(0, v)
        for i in g.out[v]:
            if g.edges[i].dst != chosen:
                drop.append(i)
    kept = g.induced(range(g.n_vertices), drop_edges=drop)
    vertices = [(kept.ids[v], P1) for v in range(kept.n_vertices)]
    edges = [(kept.ids[e.src], kept.ids[e.dst], e.weight.as_pair()) for e in kept.edges]
    init = kept.ids[kept.initial] if kept.initial is not None else None
    return GameStructure(vertices, edges, init)


def canonical_rotation(cycle: Sequence[int]) -> tuple[int, ...]:
    """Cycle as a vertex tuple (no closing repeat), lex-smallest start."""
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


def enumerate_simple_cycles(g: GameStructure, max_count: int = ENUMERATION_GUARD,
                            max_vertices: int = 12) -> list[tuple[int, ...]]:
    """All simple cycles, one per rotation class, in canonical form.

    DFS rooted at each vertex, exploring only vertices >= the root so each
    cycle is found exactly once at its smallest vertex.  Guarded: refuses
    graphs with more than ``max_vertices`` vertices and aborts when more
    than ``max_count`` cycles are produced.
    """
    if g.n_vertices > max_vertices:
        raise GuardError(f"cycle enumeration limited to {max_vertices} vertices, "
                         f"game has {g.n_vertices}")
    cycles: list[tuple[int, ...]] = []
    for root in range(g.n_vertices):
        path = [root]
        on_path = {root}

        def dfs(v: int):
            for i in g.out[v]:
                d = g.edges[i].dst
                if d == root:
                    cycles.append(tuple(path))
                    if len(cycles) > max_count:
                        raise GuardError(f"more than {max_count} simple cycles")
                elif d > root and d not in on_path:
                    path.append(d)
                    on_path.add(d)
                    dfs(d)
                    path.pop()
                    on_path.remove(d)

        dfs(root)
    return sorted(cycles)


def cycle_weight(g: GameStructure, cycle: Sequence[int]) -> tuple[int, int]:
    """Weight pair of a simple cycle given as a vertex tuple (no repeat)."""
    w1 = w2 = 0
    n = len(cycle)
    for k in range(n):
        e = g.edge_between(cycle[k], cycle[(k + 1) % n])
        w1 += e.weight.w1
        w2 += e.weight.w2
    return w1, w2


def memoryless_strategy_count(g: GameStructure, player: int) -> int:
    count = 1
    for v in g.vertices_of(player):
        count *= len(g.out[v])
    return count


def enumerate_memoryless(g: GameStructure, player: int,
                         bound: int = ENUMERATION_GUARD) -> Iterator[MooreStrategy]:
    """Yield every memoryless strategy of ``player`` exactly once."""
    total = memoryless_strategy_count(g, player)
    if total > bound:
        raise GuardError(f"{total} memoryless strategies exceed the bound {bound}")
    owned = g.vertices_of(player)
    option_lists = [sorted(g.edges[i].dst for i in g.out[v]) for v in owned]
    for combo in itertools.product(*option_lists):
        yield MooreStrategy.memoryless(g, player, dict(zip(owned, combo)))


def peel_circulation(g: GameStructure, flow: dict[int, Fraction]
                     ) -> list[tuple[tuple[int, ...], int]]:
    """Decompose a rational circulation into simple cycles.

    The flow (edge index -> nonnegative value, conserved at every vertex)
    is scaled to integers, then cycles are peeled repeatedly: walk along
    positive-count edges until a vertex repeats, subtract the minimum
    count on the extracted simple cycle.  Returns (cycle, multiplicity)
    pairs with cycles in canonical rotation.
    """
    positive = {i: v for i, v in flow.items() if v > 0}
    if not positive:
        return []
    scale = lcm(*(v.denominator for v in positive.values()))
    counts = {i: int(v * scale) for i, v in positive.items()}
    out_live: dict[int, list[int]] = {}
    for i in counts:
        out_live.setdefault(g.edges[i].src, []).append(i)
    for lst in out_live.values():
        lst.sort()
    result: dict[tuple[int, ...], int] = {}
    while counts:
        start_edge = min(counts)
        walk_edges = []
        seen_at: dict[int, int] = {}
        v = g.edges[start_edge].src
        while v not in seen_at:
            seen_at[v] = len(walk_edges)
            i = next(j for j in out_live[v] if counts.get(j, 0) > 0)
            walk_edges.append(i)
            v = g.edges[i].dst
        k = seen_at[v]
        cyc_edges = walk_edges[k:]
        mult = min(counts[i] for i in cyc_edges)
        for i in cyc_edges:
            counts[i] -= mult
            if counts[i] == 0:
                del counts[i]
        cyc = canonical_rotation([g.edges[i].src for i in cyc_edges])
        result[cyc] = result.get(cyc, 0) + mult
    return sorted(result.items())


def shortest_path(g: GameStructure, sources: Iterable[int],
                  targets: Iterable[int], allowed: Iterable[int] | None = None
                  ) -> list[int] | None:
    """BFS shortest simple path from any source to any target.

    ``allowed`` restricts intermediate vertices (sources and targets must
    be allowed too).  A source that is itself a target gives a length-0
    path.  Deterministic: vertices are expanded in index order.
    """
    allowed_set = set(allowed) if allowed is not None else None
    target_set = set(targets)
    prev: dict[int, int] = {}
    seen = []
    for s in sorted(set(sources)):
        if allowed_set is not None and s not in allowed_set:
            continue
        prev[s] = -1
        seen.append(s)
    queue = list(seen)
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        if v in target_set:
            path = [v]
            while prev[path[-1]] != -1:
                path.append(prev[path[-1]])
            return path[::-1]
        for d in sorted(g.successors(v)):
            if d in prev:
                continue
            if allowed_set is not None and d not in allowed_set:
                continue
            prev[d] = v
            queue.append(d)
    return None
