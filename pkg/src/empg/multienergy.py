"""d-dimensional energy games with unknown initial credit.

The decision procedure is a bounded greatest-fixpoint iteration over
antichains of Pareto-minimal credit vectors: the credit required at a
vertex is the minimal vector covering one successor (protagonist) or all
successors (antagonist), where covering an edge means paying its weight
and ending above a credit required at the target.  Lifts exceeding the
componentwise cap are dropped, which keeps the computation finite and
sound; completeness holds only relative to the cap, so non-winning
verdicts are downgraded to "unknown" at saturation unless an exactly
verified memoryless spoiling strategy is found.

The one-player check is exact: a reachable componentwise-nonnegative
cycle exists iff some strongly connected support of a nonnegative
circulation does, found by recursive support splitting and realized by
an Eulerian circuit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .core import EmpgError, GameFormatError, GuardError, P1, P2
from .graph import MooreStrategy
from .lp import LinearProgram


@dataclass(frozen=True)
class MegEdge:
    src: int
    dst: int
    weight: tuple[int, ...]


class MultiEnergyGame:
    """Game structure whose edges carry integer weight vectors of a fixed
    dimension; same validation rules as the 2-dimensional core type."""

    __slots__ = ("ids", "owner", "edges", "out", "index_of", "initial", "dim", "_max_abs")

    def __init__(self, vertices: Sequence[tuple[str, int]],
                 edges: Iterable[tuple[str, str, Sequence[int]]],
                 initial: str | None = None):
        ids = []
        owners = []
        index_of: dict[str, int] = {}
        for vid, owner in vertices:
            if vid in index_of:
                raise GameFormatError(f"duplicate vertex id {vid!r}")
            if owner not in (P1, P2):
                raise GameFormatError(f"vertex {vid!r}: owner must be 1 or 2")
            index_of[vid] = len(ids)
            ids.append(vid)
            owners.append(owner)
        if not ids:
            raise GameFormatError("game has no vertices")
        edge_list: list[MegEdge] = []
        seen = set()
        dim = None
        for src, dst, w in edges:
            for endpoint in (src, dst):
                if endpoint not in index_of:
                    raise GameFormatError(f"unknown vertex {endpoint!r} in edge")
            w = tuple(w)
            if dim is None:
                dim = len(w)
            if len(w) != dim or not w:
                raise GameFormatError("all weight vectors must share one dimension >= 1")
            if any(isinstance(x, bool) or not isinstance(x, int) for x in w):
                raise GameFormatError(f"non-integer weight on edge ({src!r}, {dst!r})")
            s, d = index_of[src], index_of[dst]
            if (s, d) in seen:
                raise GameFormatError(f"duplicate edge ({src!r}, {dst!r})")
            seen.add((s, d))
            edge_list.append(MegEdge(s, d, w))
        out: list[list[int]] = [[] for _ in ids]
        for i, e in enumerate(edge_list):
            out[e.src].append(i)
        for v, lst in enumerate(out):
            if not lst:
                raise GameFormatError(f"vertex {ids[v]!r} has no outgoing edge")
        self.ids = tuple(ids)
        self.owner = tuple(owners)
        self.edges = tuple(edge_list)
        self.out = tuple(tuple(lst) for lst in out)
        self.index_of = index_of
        self.dim = dim
        self.initial = index_of[initial] if initial is not None else None
        self._max_abs = max(max(abs(x) for x in e.weight) for e in edge_list)

    @property
    def n_vertices(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def max_abs_weight(self) -> int:
        return self._max_abs

    def vertices_of(self, player: int) -> list[int]:
        return [v for v in range(self.n_vertices) if self.owner[v] == player]

    def successors(self, v: int) -> list[int]:
        return [self.edges[i].dst for i in self.out[v]]

    def edge_between(self, src: int, dst: int) -> MegEdge | None:
        for i in self.out[src]:
            if self.edges[i].dst == dst:
                return self.edges[i]
        return None

    def is_one_player(self, player: int = P1) -> bool:
        return all(o == player for o in self.owner)

    def restrict_choice(self, choice: dict[int, int]) -> "MultiEnergyGame":
        """All-protagonist game with the given antagonist moves fixed."""
        vertices = [(vid, P1) for vid in self.ids]
        edges = []
        for e in self.edges:
            if e.src in choice and e.dst != choice[e.src]:
                continue
            edges.append((self.ids[e.src], self.ids[e.dst], e.weight))
        init = self.ids[self.initial] if self.initial is not None else None
        return MultiEnergyGame(vertices, edges, init)

    def to_json_dict(self) -> dict:
        doc = {
            "dim": self.dim,
            "vertices": [{"id": vid, "owner": own} for vid, own in zip(self.ids, self.owner)],
            "edges": [{"from": self.ids[e.src], "to": self.ids[e.dst],
                       "w": list(e.weight)} for e in self.edges],
        }
        if self.initial is not None:
            doc["initial"] = self.ids[self.initial]
        return doc


def parse_meg(text: str) -> MultiEnergyGame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    vertices = [(str(v["id"]), v["owner"]) for v in doc["vertices"]]
    edges = [(str(e["from"]), str(e["to"]), [int(x) for x in e["w"]]) for e in doc["edges"]]
    return MultiEnergyGame(vertices, edges, doc.get("initial"))


def default_cap(meg: MultiEnergyGame) -> int:
    """Engineering default: (|V| * ||E||)^2 per dimension, overridable."""
    return max(1, (meg.n_vertices * meg.max_abs_weight) ** 2)


def _dominates(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _dom_fn(dim: int):
    """Unrolled componentwise <= for the hot loops."""
    if dim == 1:
        return lambda a, b: a[0] <= b[0]
    if dim == 2:
        return lambda a, b: a[0] <= b[0] and a[1] <= b[1]
    if dim == 3:
        return lambda a, b: a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2]
    if dim == 4:
        return (lambda a, b: a[0] <= b[0] and a[1] <= b[1]
                and a[2] <= b[2] and a[3] <= b[3])
    return _dominates


def pareto_min(vectors: Iterable[tuple[int, ...]],
               dom=_dominates) -> list[tuple[int, ...]]:
    # Scanning by increasing coordinate sum means no later vector can
    # dominate an accepted one, so each candidate is tested against the
    # accepted prefix only.
    out: list[tuple[int, ...]] = []
    for v in sorted(set(vectors), key=_sum_key):
        for u in out:
            if dom(u, v):
                break
        else:
            out.append(v)
    return sorted(out)


@dataclass
class UnknownCreditResult:
    """Fixpoint outcome: winning set, per-vertex credit antichains, flags.

    ``saturated`` records that some lift exceeded the cap at some point;
    ``stable`` that the iteration reached a fixpoint within its round
    budget.  Vertex membership in ``winning`` is sound only when stable.
    """

    game: MultiEnergyGame
    cap: int
    credits: list[list[tuple[int, ...]]]
    winning: frozenset[int]
    saturated: bool
    stable: bool
    rounds_used: int = 0

    def credit_of(self, v: int) -> tuple[int, ...] | None:
        """Antichain element with minimal first coordinate (ties: lex)."""
        if not self.credits[v]:
            return None
        return min(self.credits[v], key=lambda c: (c[0], c))

    def verdict_for(self, v0: int) -> str:
        if self.stable and v0 in self.winning:
            return "yes"
        if self.stable and not self.saturated:
            return "no"
        if self.spoiler_for(v0) is not None:
            return "no"
        return "unknown"

    def spoiler_for(self, v0: int) -> dict[int, int] | None:
        """A memoryless antagonist choice verified to spoil from ``v0``.

        The candidate comes from the fixpoint data; the verification (no
        reachable componentwise-nonnegative cycle in the restricted game)
        is exact, so a returned choice certifies the no verdict even when
        the fixpoint itself was cut off by cap, budget or width bounds.
        """
        cache = getattr(self, "_spoiler_cache", None)
        if cache is None:
            cache = {}
            self._spoiler_cache = cache
        if v0 in cache:
            return cache[v0]
        choice = spoiler_candidate(self.game, self.credits) or {}
        restricted = self.game.restrict_choice(choice)
        verified = one_player_energy_check(restricted, v0) is None
        cache[v0] = choice if verified else None
        return cache[v0]


def _width_prune(vectors: list[tuple[int, ...]], max_width: int) -> tuple[list[tuple[int, ...]], bool]:
    """Keep the ``max_width`` smallest-sum antichain elements.

    Dropping elements under-approximates the protagonist's winning
    credits, so declared winners stay sound; completeness degrades to the
    same "unknown" bucket as the cap.
    """
    if len(vectors) <= max_width:
        return vectors, False
    kept = sorted(vectors, key=lambda c: (sum(c), c))[:max_width]
    return sorted(kept), True


def solve_unknown_credit(meg: MultiEnergyGame, cap: int | None = None,
                         round_budget: int | None = None,
                         max_width: int = 24,
                         widen_after: int | None = None) -> UnknownCreditResult:
    """Bounded controllable-predecessor fixpoint over credit antichains.

    Starts from credit (0,...,0) everywhere and raises requirements until
    stable: protagonist vertices take the Pareto minimum over edges,
    antagonist vertices the Pareto minimum over componentwise maxima
    covering every edge.  A vertex is winning iff its antichain is
    nonempty at the fixpoint.  Sound unconditionally; complete only
    relative to ``cap``, the round budget, the antichain width bound and
    the widening threshold, all of which degrade to the "unknown" verdict
    (often repaired by the verified-spoiler path), never to a wrong one.
    """
    if cap is None:
        cap = default_cap(meg)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = meg.n_vertices
    if round_budget is None:
        # Winners at desk scale stabilize well inside this; instances
        # still churning go to the verified-spoiler path or to "unknown".
        round_budget = 160 + 12 * n
    if widen_after is None:
        widen_after = 64 + 4 * n
    dim = meg.dim
    zero = (0,) * dim
    credits: list[list[tuple[int, ...]]] = [[zero] for _ in range(n)]
    saturated = False
    stable = False
    preds: list[list[int]] = [[] for _ in range(n)]
    out_edges: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(n)]
    for e in meg.edges:
        if e.src not in preds[e.dst]:
            preds[e.dst].append(e.src)
        out_edges[e.src].append((e.dst, e.weight))
    is_p1 = [o == P1 for o in meg.owner]
    streak = [0] * n
    prune_at = 3 * max_width
    dom = _dom_fn(dim)
    dirty = [True] * n

    for _round in range(round_budget):
        changed_any = False
        next_dirty = [False] * n
        for v in range(n):
            if not dirty[v]:
                continue
            if is_p1[v]:
                cands = []
                for dst, w in out_edges[v]:
                    for a in credits[dst]:
                        lv = tuple((d if d > 0 else 0)
                                   for d in map(int.__sub__, a, w))
                        if max(lv) > cap:
                            saturated = True
                        else:
                            cands.append(lv)
                if len(cands) > prune_at:
                    cands = sorted(cands, key=_sum_key)[:prune_at]
                    saturated = True
                new = pareto_min(cands, dom)
            else:
                acc: list[tuple[int, ...]] | None = [zero]
                for dst, w in out_edges[v]:
                    lifts = []
                    for a in credits[dst]:
                        lv = tuple((d if d > 0 else 0)
                                   for d in map(int.__sub__, a, w))
                        if max(lv) > cap:
                            saturated = True
                        else:
                            lifts.append(lv)
                    lifts = pareto_min(lifts, dom)
                    if not lifts:
                        acc = None
                        break
                    acc = pareto_min([tuple(map(max, u, t))
                                      for u in acc for t in lifts], dom)
                    acc, clipped = _width_prune(acc, max_width)
                    saturated = saturated or clipped
                new = acc if acc is not None else []
            # Keep the iteration monotone under pruning: a requirement may
            # only rise, so discard candidates not covering the previous
            # antichain (up-sets then shrink strictly, forcing termination).
            old = credits[v]
            new = [c for c in new if any(dom(o, c) for o in old)]
            new, clipped = _width_prune(new, max_width)
            saturated = saturated or clipped
            if new != old:
                # Widening: a vertex that keeps changing is climbing toward
                # the cap; freeze it to its already-settled elements.
                # Dropping elements only raises requirements, so winners
                # stay sound and slow climbs are cut short.
                streak[v] += 1
                if streak[v] >= widen_after:
                    old_set = set(old)
                    new = [c for c in new if c in old_set]
                    saturated = True
                    streak[v] = 0
            else:
                streak[v] = 0
            if new != old:
                credits[v] = new
                changed_any = True
                for p in preds[v]:
                    next_dirty[p] = True
        if not changed_any:
            stable = True
            break
        dirty = next_dirty
    rounds_used = _round + 1
    winning = frozenset(v for v in range(n) if credits[v]) if stable else frozenset()
    return UnknownCreditResult(meg, cap, credits, winning, saturated, stable, rounds_used)


def _sum_key(c: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    return (sum(c), c)


def minimal_credit_energy(meg: MultiEnergyGame, cap: int | None = None) -> dict[int, list[tuple[int, ...]]]:
    """Pareto-minimal credit antichain per vertex (exact up to the cap;
    for dimension 1 the single element is the minimal credit)."""
    res = solve_unknown_credit(meg, cap)
    return {v: list(res.credits[v]) for v in range(meg.n_vertices)}


def spoiler_candidate(meg: MultiEnergyGame,
                      credits: list[list[tuple[int, ...]]]) -> dict[int, int] | None:
    """Antagonist choice extracted from the fixpoint data.

    At each antagonist vertex pick the edge whose lift requirement is
    largest (dropped lifts count as infinite).  Purely heuristic; callers
    must verify the choice exactly before trusting it.
    """
    p2 = meg.vertices_of(P2)
    choice: dict[int, int] = {}
    for v in p2:
        best_edge = None
        best_key = None
        for i in sorted(meg.out[v], key=lambda j: (meg.ids[meg.edges[j].dst], j)):
            e = meg.edges[i]
            lifts = [tuple(max(ai - wi, 0) for ai, wi in zip(a, e.weight))
                     for a in credits[e.dst]]
            if not lifts:
                key = (2, 0)
            else:
                key = (1, min(sum(lv) for lv in lifts))
            if best_key is None or key > best_key:
                best_key = key
                best_edge = e.dst
        choice[v] = best_edge
    return choice if p2 else {}


# ---------------------------------------------------------------------------
# One-player exact check: reachable componentwise-nonnegative cycle.

def _circulation_program(meg: MultiEnergyGame, edge_indices: list[int]) -> tuple[LinearProgram, dict[int, int]]:
    var_of = {e: j for j, e in enumerate(edge_indices)}
    lp = LinearProgram(len(edge_indices))
    flows: dict[int, dict[int, int]] = {}
    for e in edge_indices:
        edge = meg.edges[e]
        j = var_of[e]
        flows.setdefault(edge.src, {})[j] = flows.setdefault(edge.src, {}).get(j, 0) - 1
        flows.setdefault(edge.dst, {})[j] = flows.setdefault(edge.dst, {}).get(j, 0) + 1
    for v in sorted(flows):
        coeffs = {j: c for j, c in flows[v].items() if c != 0}
        if coeffs:
            lp.add(coeffs, "=", 0)
    lp.add({j: 1 for j in range(len(edge_indices))}, "=", 1)
    for d in range(meg.dim):
        lp.add({var_of[e]: meg.edges[e].weight[d] for e in edge_indices}, ">=", 0)
    return lp, var_of


def _maximal_support(meg: MultiEnergyGame, edge_indices: list[int]
                     ) -> dict[int, Fraction] | None:
    """A feasible circulation whose support is the union of all feasible
    supports.  Grows the support in batches (maximize total flow on the
    currently-zero edges; a zero optimum proves none can ever carry
    flow), then re-solves a min-slack program over the support so the
    returned point is a basic solution with small denominators."""
    lp, var_of = _circulation_program(meg, edge_indices)
    x = lp.feasible_point()
    if x is None:
        return None
    point = {e: x[var_of[e]] for e in edge_indices}
    while True:
        zeros = [e for e in edge_indices if point[e] == 0]
        if not zeros:
            break
        res = lp.maximize({var_of[e]: 1 for e in zeros})
        if res.status != "optimal" or res.value == 0:
            break
        point = {f: (point[f] + res.x[var_of[f]]) / 2 for f in edge_indices}
    return {e: v for e, v in point.items() if v > 0}


def _min_slack_circulation(meg: MultiEnergyGame,
                           edge_indices: list[int]) -> dict[int, Fraction] | None:
    """Circulation maximizing its smallest flow value; being a basic LP
    optimum it has tame denominators, unlike iteratively averaged points."""
    lp2, var2 = _circulation_program(meg, edge_indices)
    t = len(edge_indices)
    lp3 = LinearProgram(len(edge_indices) + 1)
    for row, rel, rhs in lp2.rows:
        lp3.rows.append((row + [Fraction(0)], rel, rhs))
    for e in edge_indices:
        lp3.add({var2[e]: 1, t: -1}, ">=", 0)
    res = lp3.maximize({t: 1})
    if res.status != "optimal" or res.value <= 0:
        return None
    return {e: res.x[var2[e]] for e in edge_indices}


def _edge_sccs(meg: MultiEnergyGame, edge_indices: list[int],
               require_internal: bool = False) -> list[list[int]]:
    """Group edges by the SCC of the subgraph they span.

    Cross-component edges lie on no cycle and are dropped; for a
    circulation support every edge must be internal (``require_internal``
    asserts that)."""
    verts = sorted({meg.edges[e].src for e in edge_indices}
                   | {meg.edges[e].dst for e in edge_indices})
    vid = {v: k for k, v in enumerate(verts)}
    adj: list[list[tuple[int, int]]] = [[] for _ in verts]
    for e in edge_indices:
        adj[vid[meg.edges[e].src]].append((vid[meg.edges[e].dst], e))
    n = len(verts)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    n_comp = 0
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
            while ei < len(adj[v]):
                w = adj[v][ei][0]
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
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    groups: dict[int, list[int]] = {}
    for e in edge_indices:
        cs = comp_of[vid[meg.edges[e].src]]
        cd = comp_of[vid[meg.edges[e].dst]]
        if cs != cd:
            if require_internal:
                raise EmpgError("support edge crosses its own SCC decomposition")
            continue
        groups.setdefault(cs, []).append(e)
    return [groups[k] for k in sorted(groups)]


def _eulerian_cycle(meg: MultiEnergyGame, counts: dict[int, int]) -> tuple[int, ...]:
    g = gcd(*counts.values())
    counts = {e: c // g for e, c in counts.items()}
    total = sum(counts.values())
    if total > 500_000:
        raise GuardError(f"nonnegative-cycle witness needs {total} edges")
    remaining: dict[int, list[int]] = {}
    for e in sorted(counts):
        remaining.setdefault(meg.edges[e].src, []).extend([e] * counts[e])
    for lst in remaining.values():
        lst.sort(key=lambda e: (meg.edges[e].dst, e), reverse=True)
    start = min(remaining)
    stack = [start]
    circuit: list[int] = []
    while stack:
        v = stack[-1]
        if remaining.get(v):
            e = remaining[v].pop()
            stack.append(meg.edges[e].dst)
        else:
            circuit.append(stack.pop())
    return tuple(circuit[::-1])


def one_player_energy_check(meg: MultiEnergyGame, v0: int) -> tuple[int, ...] | None:
    """Reachable cycle with componentwise-nonnegative weight, or None.

    Per reachable SCC, searches for a nonnegative circulation whose
    support is strongly connected: the maximal-support circulation is
    computed, and if its support splits into several components the
    search recurses into each component's edge set (a feasible support
    subgraph has every edge inside one of them).  A strongly connected
    support scales to an Eulerian multigraph, realized as one cycle.
    """
    if not meg.is_one_player():
        raise EmpgError("one_player_energy_check requires a player-1 game")
    seen = {v0}
    frontier = [v0]
    while frontier:
        v = frontier.pop()
        for i in meg.out[v]:
            d = meg.edges[i].dst
            if d not in seen:
                seen.add(d)
                frontier.append(d)

    def rec(edge_set: list[int]) -> tuple[int, ...] | None:
        support = _maximal_support(meg, edge_set)
        if not support:
            return None
        groups = _edge_sccs(meg, sorted(support), require_internal=True)
        if len(groups) == 1:
            flow = _min_slack_circulation(meg, sorted(support))
            if flow is None:  # pragma: no cover - support is feasible by construction
                flow = support
            scale = lcm(*(f.denominator for f in flow.values()))
            counts = {e: int(f * scale) for e, f in flow.items()}
            return _eulerian_cycle(meg, counts)
        result = None
        for group in groups:
            found = rec(group)
            if found is not None and (result is None or len(found) < len(result)):
                result = found
        return result

    candidates = []
    reachable_edges = [i for i, e in enumerate(meg.edges)
                       if e.src in seen and e.dst in seen]
    for group in _edge_sccs(meg, reachable_edges):
        found = rec(group)
        if found is not None:
            candidates.append(found)
    if not candidates:
        return None
    return min(candidates, key=lambda c: (len(c), c))


def extract_strategy(res: UnknownCreditResult, v0: int,
                     credit: tuple[int, ...] | None = None
                     ) -> tuple[MooreStrategy, tuple[int, ...]]:
    """Winning protagonist strategy from a stable fixpoint.

    The Moore memory tracks (last consumed vertex, running credit clamped
    at the largest antichain coordinate); at protagonist vertices the
    move goes to a successor whose required credit is covered, ties
    broken by lexicographic successor id.  Forgetting clamped surplus is
    sound: winning from a lower credit implies winning from a higher one.
    """
    if not res.stable:
        raise EmpgError("fixpoint did not stabilize; no strategy available")
    if v0 not in res.winning:
        raise EmpgError(f"vertex {res.game.ids[v0]!r} is not winning within the cap")
    meg = res.game
    if credit is None:
        a0 = res.credit_of(v0)
    else:
        # Track the covered antichain element, not the offered credit:
        # decisions must not depend on surplus, so that playing the same
        # machine with extra initial energy shifts all levels uniformly.
        dominated = [a for a in res.credits[v0] if _dominates(a, tuple(credit))]
        if not dominated:
            raise EmpgError("initial credit does not cover the starting vertex")
        a0 = min(dominated, key=lambda c: (c[0], c))
    ceiling = max((x for ac in res.credits for a in ac for x in a), default=0)

    def clamp(c: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(min(x, ceiling) for x in c)

    def covered(v: int, c: tuple[int, ...]) -> bool:
        return any(_dominates(a, c) for a in res.credits[v])

    def choose(v: int, c: tuple[int, ...]) -> int:
        for i in sorted(meg.out[v], key=lambda j: (meg.ids[meg.edges[j].dst], j)):
            e = meg.edges[i]
            for a in res.credits[e.dst]:
                lv = tuple(max(ai - wi, 0) for ai, wi in zip(a, e.weight))
                if _dominates(lv, c):
                    return e.dst
        raise EmpgError("no covered successor at a winning state")

    if not covered(v0, clamp(a0)):
        raise EmpgError("initial credit does not cover the starting vertex")

    # Memory states: a pre-state, then (last consumed vertex, credit there).
    labels = ["start"]
    state_of: dict[tuple[int, tuple[int, ...]], int] = {}
    update: dict[tuple[int, int], int] = {}
    next_move: dict[tuple[int, int], int] = {}

    def intern(v: int, c: tuple[int, ...]) -> int:
        key = (v, c)
        if key not in state_of:
            state_of[key] = len(labels)
            labels.append(f"{meg.ids[v]}|{','.join(map(str, c))}")
        return state_of[key]

    c0 = clamp(a0)
    if meg.owner[v0] == P1:
        next_move[(0, v0)] = choose(v0, c0)
    update[(0, v0)] = intern(v0, c0)
    work = [(v0, c0)]
    seen = {(v0, c0)}
    while work:
        x, c = work.pop()
        m = state_of[(x, c)]
        chosen = choose(x, c) if meg.owner[x] == P1 else None
        for i in meg.out[x]:
            e = meg.edges[i]
            u = e.dst
            if chosen is not None and u != chosen:
                continue
            cu = clamp(tuple(ci + wi for ci, wi in zip(c, e.weight)))
            if not covered(u, cu):
                raise EmpgError("credit invariant broken during extraction")
            update[(m, u)] = intern(u, cu)
            if meg.owner[u] == P1:
                next_move[(m, u)] = choose(u, cu)
            if (u, cu) not in seen:
                seen.add((u, cu))
                work.append((u, cu))
    strategy = MooreStrategy(meg, P1, labels, 0, update, next_move)
    return strategy, tuple(a0)


def cycle_weight_meg(meg: MultiEnergyGame, cycle: Sequence[int]) -> tuple[int, ...]:
    total = [0] * meg.dim
    for a, b in zip(cycle, cycle[1:]):
        e = meg.edge_between(a, b)
        for d in range(meg.dim):
            total[d] += e.weight[d]
    return tuple(total)
