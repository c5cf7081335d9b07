"""Detection of reachable good cycles and good multicycles.

A good cycle (not necessarily simple) has w1 >= 0 and w2 > 0 and
certifies the strict variants; a good multicycle is a multiset of simple
cycles inside one reachable SCC with total weight >= (0,0) and certifies
the non-strict variants.  Both detectors solve exact rational circulation
LPs per reachable SCC:

* good multicycle: a nonzero circulation with both weight sums >= 0;
* good cycle: maximize the dimension-2 weight sum over circulations with
  dimension-1 sum >= 0; a good cycle exists iff the optimum is positive.

Witnesses are extracted from the optimal circulation by cycle peeling:
either a single simple cycle, or a pair (C, C') with C = (-x, y) of
maximal slope y/x and C' strictly above (or, for multicycles, on) the
line spanned by w(C).  Equivalence with the enumerate-and-check oracle is
pinned by tests on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import EmpgError, GameStructure, Weight2
from .graph import (cycle_weight, peel_circulation, reachable_set, sccs,
                    shortest_path)
from .lp import OPTIMAL, LinearProgram


class WitnessError(EmpgError):
    """A certificate does not satisfy its defining invariants."""


@dataclass
class CycleWitness:
    """Certificate for the strict variants.

    ``SimpleGood``: one simple cycle with w1 >= 0, w2 > 0.  ``TwoCycle``:
    simple cycles C = (-x, y) and C' = (x', -y') in the same reachable
    SCC with x, x', y >= 1, y' >= 0 and x'y - xy' > 0 (angle < 180
    degrees), plus coefficients a, b with a*w(C) + b*w(C') > (0, 0) and
    connector paths between the two cycles.
    """

    kind: str  # "simple" | "two-cycle"
    cycle: tuple[int, ...]
    cycle2: tuple[int, ...] | None = None
    a: int | None = None
    b: int | None = None
    path_c_cp: tuple[int, ...] | None = None  # from C to C' (vertex seq)
    path_cp_c: tuple[int, ...] | None = None

    def to_json_dict(self, g: GameStructure | None = None) -> dict:
        name = (lambda c: [g.ids[v] for v in c] if g is not None else list(c))
        doc = {"kind": self.kind, "cycle": name(self.cycle)}
        if self.kind == "two-cycle":
            doc.update({"cycle2": name(self.cycle2), "a": self.a, "b": self.b,
                        "path_c_cp": name(self.path_c_cp),
                        "path_cp_c": name(self.path_cp_c)})
        return doc


@dataclass
class MulticycleWitness:
    """Certificate for the non-strict variants.

    ``SingleCycle``: one simple cycle with w >= (0,0).  ``TwoCycle``: a
    pair as above but with angle <= 180 degrees and a*w(C) + b*w(C') >=
    (0,0).  ``Flow``: a rational circulation supported in one reachable
    SCC with both weight sums >= 0 (kept for serialization; the solvers
    always reduce to the first two kinds).
    """

    kind: str  # "single" | "two-cycle" | "flow"
    cycle: tuple[int, ...] | None = None
    cycle2: tuple[int, ...] | None = None
    a: int | None = None
    b: int | None = None
    path_c_cp: tuple[int, ...] | None = None
    path_cp_c: tuple[int, ...] | None = None
    flow: dict[int, Fraction] | None = None

    def to_json_dict(self, g: GameStructure | None = None) -> dict:
        name = (lambda c: [g.ids[v] for v in c] if g is not None else list(c))
        doc: dict = {"kind": self.kind}
        if self.cycle is not None:
            doc["cycle"] = name(self.cycle)
        if self.kind == "two-cycle":
            doc.update({"cycle2": name(self.cycle2), "a": self.a, "b": self.b,
                        "path_c_cp": name(self.path_c_cp),
                        "path_cp_c": name(self.path_cp_c)})
        if self.flow is not None:
            doc["flow"] = {str(i): str(v) for i, v in sorted(self.flow.items())}
        return doc


def combine_coefficients(w_c: Weight2, w_cp: Weight2) -> tuple[int, int]:
    """Coefficients a = xx' + yy', b = x^2 + y^2 for a strict pair.

    Requires w(C) = (-x, y) and w(C') = (x', -y') with x, x', y >= 1,
    y' >= 0 and strict angle x'y - xy' > 0; then a*w(C) + b*w(C') equals
    (x'y - xy') * (y, x) > (0, 0).
    """
    x, y = -w_c.w1, w_c.w2
    xp, yp = w_cp.w1, -w_cp.w2
    if x < 1 or y < 1 or xp < 1 or yp < 0:
        raise WitnessError(f"weights {w_c} / {w_cp} are not a (-x,y)/(x',-y') pair")
    if xp * y - x * yp <= 0:
        raise WitnessError(f"angle condition violated: x'y - xy' = {xp * y - x * yp} <= 0")
    a = x * xp + y * yp
    b = x * x + y * y
    return a, b


def witness_loop_counts(wit: CycleWitness, n_vertices: int, max_weight: int) -> tuple[int, int]:
    """Loop counts alpha = 2a|V|*||E||, beta = 2b|V|*||E|| for a two-cycle
    witness; the composite cycle (alpha loops of C, connector, beta loops
    of C', connector) then has weight > (0,0) componentwise."""
    if wit.kind != "two-cycle":
        raise WitnessError("loop counts are defined for two-cycle witnesses only")
    factor = 2 * n_vertices * max_weight
    return wit.a * factor, wit.b * factor


def small_nonneg_coefficients(w_c: Weight2, w_cp: Weight2) -> tuple[int, int]:
    """Smallest a, b >= 1 with a*w(C) + b*w(C') >= (0, 0).

    Used for multicycle witnesses so that downstream schedules loop as
    little as possible (Fig.-4-style pairs give a = b = 1).  Existence is
    guaranteed by the angle <= 180 condition; the scan is bounded by the
    closed-form coefficients.
    """
    x, y = -w_c.w1, w_c.w2
    xp, yp = w_cp.w1, -w_cp.w2
    if x < 1 or y < 1 or xp < 1 or yp < 0 or xp * y - x * yp < 0:
        raise WitnessError(f"weights {w_c} / {w_cp} are not a non-strict pair")
    limit = x * xp + y * yp + x * x + y * y
    for a in range(1, limit + 1):
        # need b*x' >= a*x (dimension 1) and a*y >= b*y' (dimension 2)
        b_lo = -((-a * x) // xp)
        b_lo = max(b_lo, 1)
        if yp == 0:
            return a, b_lo
        b_hi = (a * y) // yp
        if b_lo <= b_hi:
            return a, b_lo
    raise WitnessError("no small nonnegative combination found")  # pragma: no cover


def _circulation_lp(g: GameStructure, edge_indices: list[int]) -> tuple[LinearProgram, dict[int, int]]:
    """Flow-conservation LP over the given edges with sum x_e = 1."""
    var_of = {e: j for j, e in enumerate(edge_indices)}
    lp = LinearProgram(len(edge_indices))
    touched: dict[int, dict[int, int]] = {}
    for e in edge_indices:
        edge = g.edges[e]
        j = var_of[e]
        touched.setdefault(edge.src, {})[j] = touched.setdefault(edge.src, {}).get(j, 0) - 1
        touched.setdefault(edge.dst, {})[j] = touched.setdefault(edge.dst, {}).get(j, 0) + 1
    for v in sorted(touched):
        coeffs = {j: c for j, c in touched[v].items() if c != 0}
        if coeffs:
            lp.add(coeffs, "=", 0)
    lp.add({j: 1 for j in range(len(edge_indices))}, "=", 1)
    return lp, var_of


def zero_multicycle_exists(g: GameStructure) -> dict[int, Fraction] | None:
    """Nonzero circulation with total weight exactly (0, 0), if any.

    Flow conservation holds at every vertex and the support may span
    several components (a multicycle need not be connected).  Returns the
    circulation as edge index -> value, normalized to total flow 1.
    """
    edge_indices = list(range(g.n_edges))
    lp, var_of = _circulation_lp(g, edge_indices)
    lp.add({var_of[e]: g.edges[e].weight.w1 for e in edge_indices}, "=", 0)
    lp.add({var_of[e]: g.edges[e].weight.w2 for e in edge_indices}, "=", 0)
    x = lp.feasible_point()
    if x is None:
        return None
    return {e: x[var_of[e]] for e in edge_indices if x[var_of[e]] > 0}


def _scc_internal_edges(g: GameStructure, v0: int) -> list[tuple[int, list[int]]]:
    """(component index, internal edge list) for SCCs reachable from v0,
    restricted to components that contain at least one edge."""
    reach = reachable_set(g, v0)
    dec = sccs(g)
    out = []
    for ci, comp in enumerate(dec.components):
        if comp[0] not in reach:
            continue
        internal = dec.internal_edges(g, ci)
        if internal:
            out.append((ci, internal))
    return out


def _pick_pair(g: GameStructure, cycles: list[tuple[tuple[int, ...], int]],
               strict: bool) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Choose (C, C') from support cycles per the geometric argument.

    C has w1 < 0 <= w2 with maximal slope y/x (minimal ratio y/(-x));
    C' lies strictly above the line spanned by w(C), or on it in the
    opposite direction when ``strict`` is false.  Ties prefer shorter
    cycles, then lexicographic order.
    """
    weighted = [(cyc, cycle_weight(g, cyc)) for cyc, _ in cycles]
    second_quadrant = [(cyc, w) for cyc, w in weighted if w[0] < 0 and w[1] > 0] if strict \
        else [(cyc, w) for cyc, w in weighted if w[0] < 0 and w[1] >= 0]
    if not second_quadrant:
        return None

    def slope_key(item):
        cyc, (w1, w2) = item
        return (-Fraction(w2, -w1), len(cyc), cyc)

    c_cyc, (cw1, cw2) = min(second_quadrant, key=slope_key)
    x, y = -cw1, cw2
    above = []
    on_line_opposite = []
    for cyc, (u1, u2) in weighted:
        if cyc == c_cyc:
            continue
        side = y * u1 + x * u2
        if side > 0:
            above.append((cyc, (u1, u2)))
        elif side == 0 and u1 > 0:
            on_line_opposite.append((cyc, (u1, u2)))
    pool = above if strict else above + on_line_opposite
    candidates = [(cyc, w) for cyc, w in pool if w[0] >= 1 and w[1] <= 0]
    if not candidates:
        return None
    cp_cyc, _ = min(candidates, key=lambda item: (len(item[0]), item[0]))
    return c_cyc, cp_cyc


def _witness_from_flow(g: GameStructure, flow: dict[int, Fraction],
                       strict: bool) -> CycleWitness | MulticycleWitness | None:
    support = peel_circulation(g, flow)
    # A simple cycle in the support that certifies on its own wins.
    singles = []
    for cyc, _mult in support:
        w1, w2 = cycle_weight(g, cyc)
        if strict and w1 >= 0 and w2 > 0:
            singles.append(cyc)
        if not strict and w1 >= 0 and w2 >= 0:
            singles.append(cyc)
    if singles:
        best = min(singles, key=lambda c: (len(c), c))
        if strict:
            return CycleWitness("simple", best)
        return MulticycleWitness("single", best)

    pair = _pick_pair(g, support, strict)
    if pair is None:
        return None
    c_cyc, cp_cyc = pair
    path_c_cp = shortest_path(g, c_cyc, cp_cyc, allowed=None)
    path_cp_c = shortest_path(g, [path_c_cp[-1]], [path_c_cp[0]], allowed=None)
    w_c = Weight2(*cycle_weight(g, c_cyc))
    w_cp = Weight2(*cycle_weight(g, cp_cyc))
    if strict:
        a, b = combine_coefficients(w_c, w_cp)
        return CycleWitness("two-cycle", c_cyc, cp_cyc, a, b,
                            tuple(path_c_cp), tuple(path_cp_c))
    a, b = small_nonneg_coefficients(w_c, w_cp)
    return MulticycleWitness("two-cycle", c_cyc, cp_cyc, a, b,
                             tuple(path_c_cp), tuple(path_cp_c))


def good_multicycle_exists(g: GameStructure, v0: int) -> MulticycleWitness | None:
    """Reachable good multicycle, as a witness, or None.

    Per reachable SCC: is there a nonzero circulation on internal edges
    with both weight sums >= 0?  The circulation is peeled into simple
    cycles and reduced to a single-cycle or two-cycle witness.
    """
    candidates = []
    for _ci, internal in _scc_internal_edges(g, v0):
        lp, var_of = _circulation_lp(g, internal)
        lp.add({var_of[e]: g.edges[e].weight.w1 for e in internal}, ">=", 0)
        lp.add({var_of[e]: g.edges[e].weight.w2 for e in internal}, ">=", 0)
        x = lp.feasible_point()
        if x is None:
            continue
        flow = {e: x[var_of[e]] for e in internal if x[var_of[e]] > 0}
        wit = _witness_from_flow(g, flow, strict=False)
        if wit is not None:
            candidates.append(wit)
        else:  # pragma: no cover - the reduction above is exhaustive
            candidates.append(MulticycleWitness("flow", flow=flow))
    if not candidates:
        return None

    def rank(w: MulticycleWitness):
        if w.kind == "single":
            return (0, len(w.cycle), w.cycle)
        if w.kind == "two-cycle":
            return (1, len(w.cycle) + len(w.cycle2), w.cycle)
        return (2, 0, ())

    return min(candidates, key=rank)


def good_cycle_exists(g: GameStructure, v0: int) -> CycleWitness | None:
    """Reachable good cycle, as a witness, or None.

    Per reachable SCC: maximize the dimension-2 weight of a circulation
    whose dimension-1 weight is >= 0; a good cycle exists iff the optimum
    is positive in some SCC.  The optimal circulation yields either a
    simple good cycle or a strict-angle two-cycle pair.
    """
    candidates = []
    for _ci, internal in _scc_internal_edges(g, v0):
        lp, var_of = _circulation_lp(g, internal)
        lp.add({var_of[e]: g.edges[e].weight.w1 for e in internal}, ">=", 0)
        res = lp.maximize({var_of[e]: g.edges[e].weight.w2 for e in internal})
        if res.status != OPTIMAL or res.value <= 0:
            continue
        flow = {e: res.x[var_of[e]] for e in internal if res.x[var_of[e]] > 0}
        wit = _witness_from_flow(g, flow, strict=True)
        if wit is None:  # pragma: no cover - excluded by the proposition
            raise WitnessError("positive optimum without extractable witness")
        candidates.append(wit)
    if not candidates:
        return None

    def rank(w: CycleWitness):
        if w.kind == "simple":
            return (0, len(w.cycle), w.cycle)
        return (1, len(w.cycle) + len(w.cycle2), w.cycle)

    return min(candidates, key=rank)


def check_cycle_witness(g: GameStructure, wit: CycleWitness) -> None:
    """Re-derive a strict witness's invariants from its fields."""
    if wit.kind == "simple":
        w1, w2 = cycle_weight(g, wit.cycle)
        if not (w1 >= 0 and w2 > 0):
            raise WitnessError(f"simple witness has weight ({w1}, {w2})")
        return
    w_c = Weight2(*cycle_weight(g, wit.cycle))
    w_cp = Weight2(*cycle_weight(g, wit.cycle2))
    a, b = combine_coefficients(w_c, w_cp)
    if (a, b) != (wit.a, wit.b):
        raise WitnessError(f"stored coefficients ({wit.a}, {wit.b}) != derived ({a}, {b})")
    comb1 = a * w_c.w1 + b * w_cp.w1
    comb2 = a * w_c.w2 + b * w_cp.w2
    if not (comb1 > 0 and comb2 > 0):
        raise WitnessError(f"combination not positive: ({comb1}, {comb2})")
    dec = sccs(g)
    if not dec.same_component(wit.cycle[0], wit.cycle2[0]):
        raise WitnessError("two-cycle witness spans different SCCs")
