"""Brute-force oracles used to cross-validate the LP detectors.

Everything here works by enumerating simple cycles and checking the
characterization conditions with integer arithmetic only, so the oracles
share no code path with the simplex-based detectors they validate.
Intended for small instances (the enumeration guard applies).
"""

from __future__ import annotations

from .core import GameStructure
from .graph import cycle_weight, enumerate_simple_cycles, reachable_set, sccs


def _reachable_cycles_by_scc(g: GameStructure, v0: int) -> dict[int, list[tuple[tuple[int, ...], tuple[int, int]]]]:
    reach = reachable_set(g, v0)
    dec = sccs(g)
    grouped: dict[int, list] = {}
    for cyc in enumerate_simple_cycles(g):
        if cyc[0] not in reach:
            continue
        grouped.setdefault(dec.comp_of[cyc[0]], []).append((cyc, cycle_weight(g, cyc)))
    return grouped


def oracle_good_cycle(g: GameStructure, v0: int) -> bool:
    """Reachable good cycle, decided from enumerated simple cycles.

    True iff some reachable simple cycle has w1 >= 0 and w2 > 0, or some
    same-SCC pair has weights (-x, y) and (x', -y') with x, x', y >= 1,
    y' >= 0 and x'y - xy' > 0 (angle strictly below 180 degrees).
    """
    for cycles in _reachable_cycles_by_scc(g, v0).values():
        for _cyc, (w1, w2) in cycles:
            if w1 >= 0 and w2 > 0:
                return True
        negs = [(-w1, w2) for _c, (w1, w2) in cycles if w1 < 0 and w2 > 0]
        pos = [(w1, -w2) for _c, (w1, w2) in cycles if w1 > 0 and w2 <= 0]
        for x, y in negs:
            for xp, yp in pos:
                if xp * y - x * yp > 0:
                    return True
    return False


def oracle_good_multicycle(g: GameStructure, v0: int) -> bool:
    """Reachable good multicycle, decided from enumerated simple cycles.

    True iff within one reachable SCC some simple cycle has w >= (0,0) or
    some pair has weights (-x, y) / (x', -y') with x, x', y >= 1, y' >= 0
    and x'y - xy' >= 0 (angle at most 180 degrees); both conditions are
    equivalent to a nonnegative integer combination of cycle weights
    being componentwise >= (0,0).
    """
    for cycles in _reachable_cycles_by_scc(g, v0).values():
        for _cyc, (w1, w2) in cycles:
            if w1 >= 0 and w2 >= 0:
                return True
        negs = [(-w1, w2) for _c, (w1, w2) in cycles if w1 < 0 and w2 > 0]
        pos = [(w1, -w2) for _c, (w1, w2) in cycles if w1 > 0 and w2 < 0]
        for x, y in negs:
            for xp, yp in pos:
                if xp * y - x * yp >= 0:
                    return True
    return False


def oracle_good_multicycle_combination(g: GameStructure, v0: int) -> bool:
    """Second multicycle oracle: search integer combinations directly.

    Scans singles and then coefficient pairs (a, b) for every two-cycle
    combination, with the scan bound x*x' + y*y' + x^2 + y^2 taken from
    the combination lemma, so a certificate is found whenever one exists.
    Restricting multisets to at most two distinct cycles is justified by
    the two-cycle proposition, which this oracle cross-checks without
    using its determinant-sign algebra.
    """
    for cycles in _reachable_cycles_by_scc(g, v0).values():
        weights = sorted({w for _c, w in cycles})
        for w1, w2 in weights:
            if w1 >= 0 and w2 >= 0:
                return True
        for u1, u2 in weights:
            for v1, v2 in weights:
                if (u1, u2) == (v1, v2):
                    continue
                bound = abs(u1 * v1) + abs(u2 * v2) + u1 * u1 + u2 * u2 + 2
                for a in range(1, bound + 1):
                    # Feasible b >= 1 for a*u + b*v >= (0,0), solved per
                    # dimension: v > 0 gives a lower bound on b, v < 0 an
                    # upper bound, v = 0 a condition on a alone.
                    lo, hi, ok = 1, None, True
                    for u, v in ((u1, v1), (u2, v2)):
                        if v > 0:
                            lo = max(lo, -((a * u) // v))
                        elif v < 0:
                            h = (a * u) // (-v)
                            hi = h if hi is None else min(hi, h)
                        elif a * u < 0:
                            ok = False
                    if ok and (hi is None or lo <= hi):
                        return True
    return False


def enumerate_simple_cycles_by_edges(g: GameStructure) -> list[tuple[int, ...]]:
    """Independent simple-cycle enumerator: filter edge subsets.

    A nonempty edge subset forms a simple cycle iff its edges can be
    ordered into a single closed walk visiting each source vertex once.
    Exponential in |E|; only for cross-checking the DFS enumerator on
    very small graphs.
    """
    n_e = g.n_edges
    found = set()
    for mask in range(1, 1 << n_e):
        idx = [i for i in range(n_e) if mask >> i & 1]
        srcs = [g.edges[i].src for i in idx]
        dsts = [g.edges[i].dst for i in idx]
        if len(set(srcs)) != len(idx) or len(set(dsts)) != len(idx):
            continue
        if set(srcs) != set(dsts):
            continue
        nxt = {g.edges[i].src: g.edges[i].dst for i in idx}
        start = srcs[0]
        seen = [start]
        v = nxt[start]
        while v != start and len(seen) <= len(idx):
            seen.append(v)
            v = nxt[v]
        if v == start and len(seen) == len(idx):
            k = seen.index(min(seen))
            found.add(tuple(seen[k:]) + tuple(seen[:k]))
    return sorted(found)
