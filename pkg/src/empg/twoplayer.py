"""Two-player solving: enumeration, reduction, and infinite-memory plans.

The antagonist never needs memory, so the decision problem reduces to
checking every memoryless antagonist strategy against the one-player
solver (the certificate-checking half of co-NP membership).  Strict
variants can alternatively be solved through the 4-dimensional gadget
reduction, which also yields finite-memory protagonist strategies.  For
non-strict variants a winning protagonist may need infinite memory; the
plan below plays a sequence of finite-memory strategies, one per level i
with mean-payoff guarantee above -1/2^i, switching levels once the
accumulated dimension-2 weight clears the next strategy's product-size
allowance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (EmpgError, GameStructure, GuardError, ObjectiveSpec, P1,
                   P2, Verdict, NO, UNKNOWN, YES, normalize_threshold)
from .cycles import good_cycle_exists, good_multicycle_exists
from .graph import (MooreStrategy, enumerate_memoryless,
                    memoryless_strategy_count, product_restriction,
                    reachable_set, sccs)
from .lp import OPTIMAL
from .multienergy import (MultiEnergyGame, default_cap, extract_strategy,
                          solve_unknown_credit)
from .oneplayer import solve_one_player
from .reduction import pull_back_strategy, to_energy4

ENUM_LIMIT = 10 ** 6


class PlanError(EmpgError):
    """Infinite-plan construction or execution failed loudly."""


def _one_player_winning_starts(g: GameStructure, strict: bool) -> frozenset[int]:
    """Vertices from which the one-player objective is winnable: those
    that reach an SCC whose circulation LP is positive/feasible."""
    from .cycles import _circulation_lp

    dec = sccs(g)
    positive_vertices: set[int] = set()
    for ci, comp in enumerate(dec.components):
        internal = dec.internal_edges(g, ci)
        if not internal:
            continue
        lp, var_of = _circulation_lp(g, internal)
        lp.add({var_of[e]: g.edges[e].weight.w1 for e in internal}, ">=", 0)
        if strict:
            res = lp.maximize({var_of[e]: g.edges[e].weight.w2 for e in internal})
            ok = res.status == OPTIMAL and res.value > 0
        else:
            lp.add({var_of[e]: g.edges[e].weight.w2 for e in internal}, ">=", 0)
            ok = lp.feasible_point() is not None
        if ok:
            positive_vertices.update(comp)
    # backward reachability to any positive SCC
    rev: list[list[int]] = [[] for _ in range(g.n_vertices)]
    for e in g.edges:
        rev[e.dst].append(e.src)
    frontier = sorted(positive_vertices)
    seen = set(frontier)
    while frontier:
        v = frontier.pop()
        for u in rev[v]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return frozenset(seen)


def solve_two_player(g: GameStructure, v0: int, spec: ObjectiveSpec,
                     limit: int = ENUM_LIMIT) -> Verdict:
    """Enumeration solver: yes iff every memoryless antagonist strategy
    leaves the one-player objective winnable in the restricted game.

    A no verdict carries the first spoiling strategy found, valid for
    every initial credit.  Mean-payoff-inf and -sup verdicts coincide.
    """
    g0, spec0 = normalize_threshold(g, spec)
    count = memoryless_strategy_count(g0, P2)
    if count > limit:
        raise GuardError(f"{count} antagonist strategies exceed the bound {limit}; "
                         "use the reduction route for strict specs")
    for s2 in enumerate_memoryless(g0, P2):
        restricted = product_restriction(g0, s2)
        inner = solve_one_player(restricted, v0, spec0)
        if not inner.is_yes:
            return Verdict(NO, certificate=s2, route="two-player-enum")
    return Verdict(YES, route="two-player-enum")


def spoiling_strategy(g: GameStructure, v0: int, spec: ObjectiveSpec,
                      limit: int = ENUM_LIMIT) -> MooreStrategy | None:
    """The antagonist certificate from a no verdict, or None on yes."""
    verdict = solve_two_player(g, v0, spec, limit)
    if verdict.is_yes:
        return None
    return verdict.certificate


def meg_choice_to_strategy(g: GameStructure, meg: MultiEnergyGame,
                           gmap, choice: dict[int, int]) -> MooreStrategy:
    """Translate an antagonist choice on the gadget game (targets are
    r-vertices) back to a memoryless strategy on the original game."""
    back = {}
    for v_meg, r_meg in choice.items():
        vid = meg.ids[v_meg]
        r_id = meg.ids[r_meg]
        e = gmap.edge_of_entry[r_id]
        back[g.index_of[vid]] = g.edges[e].dst
    return MooreStrategy.memoryless(g, P2, back)


def solve_strict_pseudo_poly(g: GameStructure, v0: int, spec: ObjectiveSpec,
                             cap: int | None = None,
                             round_budget: int | None = None) -> Verdict:
    """Strict variants through the gadget reduction.

    Tri-state: yes (with pulled-back strategy and its dimension-1
    credit), no (with a verified memoryless antagonist strategy when one
    is found), or unknown at cap/budget saturation.
    """
    if not spec.is_strict:
        raise ValueError("the reduction applies to strict variants only")
    g0, _spec0 = normalize_threshold(g, spec)
    meg, gmap = to_energy4(g0)
    v0_meg = meg.index_of[g0.ids[v0]]

    # Cheap first pass: a short fixpoint burst usually points at the
    # spoiling antagonist choice, whose verification is exact, so losing
    # instances conclude without waiting for stabilization.
    probe = solve_unknown_credit(meg, cap, round_budget=24)
    if not (probe.stable and v0_meg in probe.winning):
        if probe.spoiler_for(v0_meg) is not None:
            cert = meg_choice_to_strategy(g0, meg, gmap, probe.spoiler_for(v0_meg))
            return Verdict(NO, certificate=cert, route="two-player-reduce")

    res = probe if probe.stable else solve_unknown_credit(meg, cap, round_budget)
    answer = res.verdict_for(v0_meg)
    if answer == YES:
        s_prime, credit = extract_strategy(res, v0_meg)
        pulled = pull_back_strategy(s_prime, g0, gmap, v0)
        return Verdict(YES, initial_credit=credit[0], certificate=pulled,
                       route="two-player-reduce")
    if answer == NO:
        choice = res.spoiler_for(v0_meg)
        cert = None
        if choice is not None:
            cert = meg_choice_to_strategy(g0, meg, gmap, choice)
        return Verdict(NO, certificate=cert, route="two-player-reduce")
    return Verdict(UNKNOWN, route="two-player-reduce")


def winning_region(g: GameStructure, spec: ObjectiveSpec,
                   limit: int = ENUM_LIMIT) -> frozenset[int]:
    """Vertices from which the protagonist wins the given variant.

    Computed by intersecting, over all memoryless antagonist strategies,
    the set of vertices whose restricted one-player game is winnable.
    """
    g0, spec0 = normalize_threshold(g, spec)
    count = memoryless_strategy_count(g0, P2)
    if count > limit:
        raise GuardError(f"{count} antagonist strategies exceed the bound {limit}")
    win: frozenset[int] | None = None
    for s2 in enumerate_memoryless(g0, P2):
        restricted = product_restriction(g0, s2)
        starts = _one_player_winning_starts(restricted, spec0.is_strict)
        win = starts if win is None else (win & starts)
        if not win:
            return frozenset()
    return win if win is not None else frozenset()


@dataclass
class PlanLevel:
    index: int
    credits: dict[int, int]               # vertex (original index) -> c_i(v)
    machines: dict[int, MooreStrategy]    # vertex -> pulled-back strategy
    memory: dict[int, int]                # vertex -> Moore memory size


class InfiniteStrategyPlan:
    """Effective infinite-memory protagonist strategy for non-strict specs.

    Construction restricts the game to the winning region, then solves
    the strict problem at threshold -1/2^i per level i through the
    reduction, recording per-vertex credits c_i(v) and pulled-back
    strategies.  kappa is fixed at the first credit plateau and the
    initial credit is d0 = kappa*gamma + c_1(v0).  When the whole region
    is winnable strictly at threshold 0, that single strategy family
    serves every level.  Execution plays level i's strategy from the
    current segment start and switches to level i+1 as soon as

        w2(rho) > N_{i+1}(v) * ||E|| - |rho| / 2^i

    holds at the current vertex v (exact integer arithmetic), which the
    accumulation property guarantees to happen at every level.
    """

    MAX_CONSTRUCTION_LEVELS = 64

    def __init__(self, g: GameStructure, v0: int, spec: ObjectiveSpec,
                 limit: int = ENUM_LIMIT, cap: int | None = None,
                 round_budget: int = 40_000):
        if spec.is_strict:
            raise PlanError("infinite plans target the non-strict variants")
        g0, spec0 = normalize_threshold(g, spec)
        win = winning_region(g0, spec0, limit)
        if v0 not in win:
            raise PlanError("initial vertex is not winning; no plan exists")
        for v in sorted(win):
            if g0.owner[v] == P2 and not all(t in win for t in g0.successors(v)):
                raise PlanError("winning region is not antagonist-closed")
        self.game = g0
        self.v0 = v0
        self.win = win
        self.region = g0.induced(win)
        self.max_weight = self.region.max_abs_weight
        self._cap = cap
        self._round_budget = round_budget
        self._levels: dict[int, PlanLevel] = {}
        self._to_region = {v: self.region.index_of[g0.ids[v]] for v in win}
        self._from_region = {r: g0.index_of[self.region.ids[r]] for r in range(self.region.n_vertices)}

        self._strict_base = self._solve_level_game(self.region, 0)
        if self._strict_base is not None:
            self.kappa = 1
            self.gamma = 0
            base = self._strict_base
            self._levels[1] = base
            self.d0 = self.kappa * self.gamma + base.credits[v0]
        else:
            self._materialize(1)
            i = 1
            while True:
                self._materialize(i + 1)
                if self._levels[i + 1].credits == self._levels[i].credits:
                    break
                i += 1
                if i >= self.MAX_CONSTRUCTION_LEVELS:
                    raise PlanError("credits did not stabilize within the level budget")
            self.kappa = i
            rises = [self._levels[j + 1].credits[v] - self._levels[j].credits[v]
                     for j in range(1, i + 1) for v in sorted(win)]
            self.gamma = max(rises + [0])
            self.d0 = self.kappa * self.gamma + self._levels[1].credits[v0]
        self.reset(v0)

    # -- construction ------------------------------------------------

    def _level_game(self, i: int) -> GameStructure:
        if i == 0:
            return self.region
        spec_i = ObjectiveSpec("inf", "strict", Fraction(-1, 2 ** i))
        game_i, _ = normalize_threshold(self.region, spec_i)
        return game_i

    def _solve_level_game(self, game_i: GameStructure, index: int) -> PlanLevel | None:
        meg, gmap = to_energy4(game_i)
        # Plan levels are solved on the winning region, where every vertex
        # is strictly winnable: run to stabilization, no widening cutoff.
        res = solve_unknown_credit(meg, self._cap, self._round_budget,
                                   widen_after=10 ** 9)
        if not res.stable:
            return None
        credits: dict[int, int] = {}
        machines: dict[int, MooreStrategy] = {}
        memory: dict[int, int] = {}
        for v in sorted(self.win):
            v_meg = meg.index_of[self.game.ids[v]]
            if v_meg not in res.winning:
                return None
            credits[v] = res.credit_of(v_meg)[0]
            s_prime, _ = extract_strategy(res, v_meg)
            pulled = pull_back_strategy(s_prime, game_i, gmap,
                                        game_i.index_of[self.game.ids[v]])
            machines[v] = pulled
            memory[v] = pulled.memory_size
        return PlanLevel(index, credits, machines, memory)

    def _materialize(self, i: int) -> PlanLevel:
        if i not in self._levels:
            level = self._solve_level_game(self._level_game(i), i)
            if level is None:
                raise PlanError(f"level {i} not solvable within cap; plan construction failed")
            self._levels[i] = level
        return self._levels[i]

    def level(self, i: int) -> PlanLevel:
        if self._strict_base is not None:
            return self._strict_base
        if i not in self._levels:
            level = self._solve_level_game(self._level_game(i), i)
            if level is None:
                raise PlanError(f"level {i} not solvable within cap")
            if i > self.kappa and level.credits != self._levels[self.kappa].credits:
                raise PlanError(f"credit plateau broken at level {i}")
            self._levels[i] = level
        return self._levels[i]

    # -- execution ----------------------------------------------------

    def reset(self, v0: int | None = None) -> None:
        if v0 is not None and v0 != self.v0:
            raise PlanError("plan was constructed for a different initial vertex")
        self.level_index = 1
        self.length = 0
        self.w2_total = 0
        self._rise_sum = 0
        self.delta = self.kappa * self.gamma
        lvl = self.level(1)
        self._machine = lvl.machines[self.v0]
        self._mstate = self._machine.initial
        self.switches: list[tuple[int, int, int, int]] = [(0, 1, self.v0, self.delta)]

    def move(self, v: int) -> int:
        r = self._to_region[v]
        target_r = self._machine.move(self._mstate, r)
        return self._from_region[target_r]

    def observe(self, src: int, dst: int) -> None:
        """Advance bookkeeping after the play took edge (src, dst); checks
        the switching inequality at the new current vertex."""
        if src not in self._to_region or dst not in self._to_region:
            raise PlanError("play left the winning region")
        self._mstate = self._machine.advance(self._mstate, self._to_region[src])
        e = self.game.edge_between(src, dst)
        self.w2_total += e.weight.w2
        self.length += 1
        i = self.level_index
        nxt = self.level(i + 1)
        n_next = len(self.win) * nxt.memory[dst]
        # w2 > N * ||E|| - |rho| * (1/2^i), exactly
        if (self.w2_total << i) + self.length > (n_next * self.max_weight) << i:
            cur = self.level(i)
            rise = nxt.credits[dst] - cur.credits[dst]
            self._rise_sum += rise
            self.delta = self.kappa * self.gamma - self._rise_sum
            if self.delta < 0:
                raise PlanError("credit slack went negative at a switch")
            self.level_index = i + 1
            self._machine = nxt.machines[dst]
            self._mstate = self._machine.initial
            self.switches.append((self.length, self.level_index, dst, self.delta))

    def to_json_dict(self) -> dict:
        ids = self.game.ids
        materialized = {}
        for i in sorted(self._levels):
            lvl = self._levels[i]
            materialized[str(i)] = {
                "credits": {ids[v]: c for v, c in sorted(lvl.credits.items())},
                "memory": {ids[v]: m for v, m in sorted(lvl.memory.items())},
            }
        return {
            "kind": "infinite-plan",
            "winning_region": [ids[v] for v in sorted(self.win)],
            "kappa": self.kappa,
            "gamma": self.gamma,
            "d0": self.d0,
            "strict_mode": self._strict_base is not None,
            "levels": materialized,
        }


def build_infinite_plan(g: GameStructure, v0: int, spec: ObjectiveSpec,
                        limit: int = ENUM_LIMIT, cap: int | None = None) -> InfiniteStrategyPlan:
    """Construct the effective infinite-memory strategy (non-strict yes)."""
    return InfiniteStrategyPlan(g, v0, spec, limit, cap)
