"""One-player solving and strategy synthesis.

For player-1 game structures the strict variants hold iff a reachable
good cycle exists and the non-strict variants iff a reachable good
multicycle exists; both are decided by the LP detectors.  Synthesis turns
a strict witness into a finite-memory strategy that reaches the witness
cycle and loops it forever, and a non-strict witness into an
infinite-memory round schedule that alternates the two witness cycles
with per-round counts Z*beta + gamma and Z*alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (EmpgError, GameStructure, ObjectiveSpec, PlayPrefix,
                   Verdict, NO, YES, normalize_threshold, walk_weight)
from .cycles import (CycleWitness, MulticycleWitness, check_cycle_witness,
                     good_cycle_exists, good_multicycle_exists,
                     witness_loop_counts)
from .graph import MooreStrategy, shortest_path


class SynthesisError(EmpgError):
    """A witness is unusable for the game it was offered against."""


def solve_one_player(g: GameStructure, v0: int, spec: ObjectiveSpec) -> Verdict:
    """Decide one of the four variants on a player-1 game structure.

    Strict specs reduce to reachable-good-cycle detection, non-strict
    specs to reachable-good-multicycle detection; mean-payoff-inf and
    -sup always receive the same answer.  A yes verdict carries the
    witness and an initial credit sufficient for the synthesized strategy.
    """
    if not g.is_one_player():
        raise SynthesisError("solve_one_player requires a player-1 game structure")
    gn, spec_n = normalize_threshold(g, spec)
    if spec_n.is_strict:
        wit = good_cycle_exists(gn, v0)
        if wit is None:
            return Verdict(NO, route="one-player-lp")
        credit = (gn.n_vertices - 1) * gn.max_abs_weight
        return Verdict(YES, initial_credit=credit, certificate=wit, route="one-player-lp")
    wit = good_multicycle_exists(gn, v0)
    if wit is None:
        return Verdict(NO, route="one-player-lp")
    schedule = synthesize_nonstrict(gn, v0, wit)
    return Verdict(YES, initial_credit=schedule.initial_credit,
                   certificate=wit, route="one-player-lp")


def _rotate(cycle: tuple[int, ...], start: int) -> list[int]:
    k = cycle.index(start)
    return list(cycle[k:]) + list(cycle[:k])


def _closed_walk(cycle: list[int]) -> list[int]:
    return cycle + [cycle[0]]


def _positional_machine(g: GameStructure, access: list[int],
                        loop: list[int]) -> MooreStrategy:
    """Moore machine that follows ``access`` then loops the closed walk
    ``loop`` (first == last vertex); one memory state per position."""
    assert access[-1] == loop[0] and loop[0] == loop[-1]
    acc = access[:-1]
    cyc = loop[:-1]
    names = [f"a{i}" for i in range(len(acc))] + [f"c{j}" for j in range(len(cyc))]
    n_acc = len(acc)
    n_cyc = len(cyc)
    update = {}
    next_move = {}
    planned = acc + cyc
    for k, v in enumerate(planned):
        if k < n_acc:
            succ_state = k + 1 if k + 1 < len(planned) else n_acc
            nxt = planned[k + 1] if k + 1 < len(planned) else cyc[0]
        else:
            j = k - n_acc
            succ_state = n_acc + (j + 1) % n_cyc
            nxt = cyc[(j + 1) % n_cyc]
        update[(k, v)] = succ_state
        next_move[(k, v)] = nxt
    return MooreStrategy(g, 1, names, 0, update, next_move)


def _min_energy_rotation(g: GameStructure, loop: list[int]) -> list[int]:
    """Rotate a closed walk to enter at its lowest dim-1 energy position."""
    prefix = 0
    best_val = 0
    best_k = 0
    for k in range(len(loop) - 1):
        if prefix < best_val:
            best_val = prefix
            best_k = k
        e = g.edge_between(loop[k], loop[k + 1])
        prefix += e.weight.w1
    body = loop[:-1]
    rotated = body[best_k:] + body[:best_k]
    return rotated + [rotated[0]]


def synthesize_strict(g: GameStructure, v0: int,
                      wit: CycleWitness) -> tuple[MooreStrategy, int]:
    """Finite-memory strategy from a strict witness, with its credit.

    The strategy reaches the witness cycle and loops it forever; the
    reported credit is the formula value (|V| - 1) * ||E||.  For a simple
    witness the cycle is entered at the access path's first touch, which
    keeps the strategy memoryless; a two-cycle witness yields a composite
    cycle (alpha loops of C, connector, beta loops of C', connector)
    rotated to its energy-minimal position, with one memory state per
    position.
    """
    try:
        check_cycle_witness(g, wit)
    except EmpgError as exc:
        raise SynthesisError(f"witness invalid for this game: {exc}") from exc
    credit = (g.n_vertices - 1) * g.max_abs_weight

    if wit.kind == "simple":
        access = shortest_path(g, [v0], list(wit.cycle))
        if access is None:
            raise SynthesisError("witness cycle is not reachable from the initial vertex")
        entry = access[-1]
        loop = _closed_walk(_rotate(wit.cycle, entry))
        choice = {}
        for k in range(len(loop) - 1):
            choice[loop[k]] = loop[k + 1]
        for a, b in zip(access, access[1:]):
            if a not in choice:
                choice[a] = b
        strategy = MooreStrategy.memoryless(g, 1, choice)
        return strategy, credit

    alpha, beta = witness_loop_counts(wit, g.n_vertices, g.max_abs_weight)
    a_anchor = wit.path_c_cp[0]
    b_anchor = wit.path_c_cp[-1]
    loop_c = _rotate(wit.cycle, a_anchor)
    loop_cp = _rotate(wit.cycle2, b_anchor)
    composite: list[int] = [a_anchor]
    for _ in range(alpha):
        composite.extend(loop_c[1:] + [a_anchor])
    composite.extend(wit.path_c_cp[1:])
    for _ in range(beta):
        composite.extend(loop_cp[1:] + [b_anchor])
    composite.extend(wit.path_cp_c[1:])
    w1, w2 = walk_weight(g, composite)
    if not (w1 > 0 and w2 > 0):
        raise SynthesisError(f"composite cycle weight ({w1}, {w2}) is not positive")
    composite = _min_energy_rotation(g, composite)
    access = shortest_path(g, [v0], [composite[0]])
    if access is None:
        raise SynthesisError("witness cycles are not reachable from the initial vertex")
    return _positional_machine(g, access, composite), credit


class ScheduleStrategy:
    """Infinite-memory round schedule certifying the non-strict variants.

    Round Z (starting at 1): loop C' for Z*beta + gamma turns, follow the
    connector to C, loop C for Z*alpha turns, return to C'.  gamma is the
    smallest count whose dim-1 gain on C' covers the connectors' dim-1
    losses.  A single-cycle witness degenerates to looping that cycle.

    Iteration state (current round, position) is mutable and single
    consumer; the static description serializes to JSON.
    """

    def __init__(self, game: GameStructure, v0: int, wit: MulticycleWitness):
        self.game = game
        self.v0 = v0
        self.kind = wit.kind
        if wit.kind == "single":
            access = shortest_path(game, [v0], list(wit.cycle))
            if access is None:
                raise SynthesisError("witness cycle unreachable")
            self.access = access
            self.cycle_prime = _closed_walk(_rotate(wit.cycle, access[-1]))
            self.cycle = None
            self.path_cp_c = None
            self.path_c_cp = None
            self.alpha = 0
            self.beta = 1
            self.gamma = 0
        elif wit.kind == "two-cycle":
            access = shortest_path(game, [v0], list(wit.cycle2))
            if access is None:
                raise SynthesisError("witness cycles unreachable")
            b_anchor = access[-1]
            path_cp_c = shortest_path(game, [b_anchor], list(wit.cycle))
            a_anchor = path_cp_c[-1]
            path_c_cp = shortest_path(game, [a_anchor], [b_anchor])
            self.access = access
            self.cycle_prime = _closed_walk(_rotate(wit.cycle2, b_anchor))
            self.cycle = _closed_walk(_rotate(wit.cycle, a_anchor))
            self.path_cp_c = path_cp_c
            self.path_c_cp = path_c_cp
            self.alpha = wit.a
            self.beta = wit.b
            xp = walk_weight(game, self.cycle_prime)[0]
            drain_mid = -walk_weight(game, path_cp_c)[0]
            drain_all = drain_mid - walk_weight(game, path_c_cp)[0]
            need = max(0, drain_mid, drain_all)
            self.gamma = -(-need // xp) if need > 0 else 0
        else:
            raise SynthesisError(f"cannot build a schedule from a {wit.kind!r} witness")
        self.initial_credit = self._required_credit()
        self.reset()

    def _round_targets(self, z: int) -> list[int]:
        if self.kind == "single":
            return self.cycle_prime[1:]
        out: list[int] = []
        for _ in range(z * self.beta + self.gamma):
            out.extend(self.cycle_prime[1:])
        out.extend(self.path_cp_c[1:])
        for _ in range(z * self.alpha):
            out.extend(self.cycle[1:])
        out.extend(self.path_c_cp[1:])
        return out

    def _required_credit(self) -> int:
        # The play's dim-1 minimum is reached during the access path or
        # the first rounds: rounds gain a nonnegative net amount and each
        # later round's relative dips are no deeper.  Simulate two rounds.
        walk = list(self.access)
        for z in (1, 2):
            for t in self._round_targets(z):
                walk.append(t)
        p = PlayPrefix(self.game, walk)
        lowest = min(p.cum1)
        access_total = abs(walk_weight(self.game, self.access)[0])
        return max(0, -lowest, access_total)

    def reset(self) -> None:
        self._next_round = 1
        self._pending = list(self.access[1:])
        self._pending_round = 0  # access moves precede round 1
        self.last_round = 0
        self._expected = self.v0
        self.steps_taken = 0

    def next_move(self, current: int) -> int:
        """Planned successor; raises if the caller deviated from the plan."""
        if current != self._expected:
            raise SynthesisError(
                f"schedule expected {self.game.ids[self._expected]!r}, "
                f"play is at {self.game.ids[current]!r}")
        if not self._pending:
            self._pending = self._round_targets(self._next_round)
            self._pending_round = self._next_round
            if self.kind != "single":
                self._next_round += 1
        nxt = self._pending.pop(0)
        self.last_round = self._pending_round
        self._expected = nxt
        self.steps_taken += 1
        return nxt

    def to_json_dict(self) -> dict:
        ids = self.game.ids
        doc = {
            "kind": "schedule",
            "variant": self.kind,
            "access": [ids[v] for v in self.access],
            "cycle_prime": [ids[v] for v in self.cycle_prime],
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "initial_credit": self.initial_credit,
        }
        if self.kind == "two-cycle":
            doc["cycle"] = [ids[v] for v in self.cycle]
            doc["path_cp_c"] = [ids[v] for v in self.path_cp_c]
            doc["path_c_cp"] = [ids[v] for v in self.path_c_cp]
        return doc


def synthesize_nonstrict(g: GameStructure, v0: int,
                         wit: MulticycleWitness) -> ScheduleStrategy:
    """Round-schedule strategy from a non-strict witness."""
    return ScheduleStrategy(g, v0, wit)


def local_minima(p: PlayPrefix, horizon: int) -> list[int]:
    """Positions whose energy is never undercut later within the horizon.

    Position k (0 <= k <= horizon) qualifies when w1(p[0,k]) <= w1(p[0,l])
    for every k < l <= horizon; the horizon position itself qualifies
    vacuously.  This is the finite-horizon approximation of the local
    minimum definition, diagnostic only.
    """
    if horizon > p.n_edges:
        raise ValueError(f"horizon {horizon} exceeds prefix length {p.n_edges}")
    out = []
    suffix_min = None
    for k in range(horizon, -1, -1):
        if suffix_min is None or p.cum1[k] <= suffix_min:
            out.append(k)
        suffix_min = p.cum1[k] if suffix_min is None else min(suffix_min, p.cum1[k])
    return out[::-1]
