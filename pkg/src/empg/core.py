"""Core data model: weighted game graphs, plays, objectives and verdicts.

A game structure is a finite directed graph whose vertices are split
between player 1 (the protagonist) and player 2 (the antagonist), every
vertex has at least one outgoing edge, and each edge carries a pair of
integer weights.  Dimension 1 is the energy dimension, dimension 2 the
mean-payoff dimension.  All arithmetic in this package is exact: weights
are Python integers, averages are ``fractions.Fraction``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

P1 = 1
P2 = 2

MP_INF = "inf"
MP_SUP = "sup"
STRICT = "strict"
NONSTRICT = "nonstrict"

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


class EmpgError(Exception):
    """Base class for all errors raised by this package."""


class GameFormatError(EmpgError):
    """The input document does not describe a valid game structure."""


class GuardError(EmpgError):
    """An enumeration guard (vertex count, cycle count, ...) was exceeded."""


@dataclass(frozen=True)
class Weight2:
    """Edge weight pair: ``w1`` is energy, ``w2`` is mean-payoff."""

    w1: int
    w2: int

    def dim(self, j: int) -> int:
        if j == 1:
            return self.w1
        if j == 2:
            return self.w2
        raise ValueError(f"weight dimension must be 1 or 2, got {j}")

    def as_pair(self) -> tuple[int, int]:
        return (self.w1, self.w2)


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: Weight2


class GameStructure:
    """Immutable two-player game graph with 2-dimensional integer weights.

    Vertices are referenced by stable string ids in I/O and by dense
    integer indices internally.  Construction validates the game-structure
    invariants: total ownership, at least one outgoing edge per vertex,
    and at most one edge per (source, target) pair.
    """

    __slots__ = ("ids", "owner", "edges", "initial", "index_of", "out",
                 "_inv", "_max_abs")

    def __init__(self, vertices: Sequence[tuple[str, int]],
                 edges: Iterable[tuple[str, str, tuple[int, int]]],
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

        edge_list: list[Edge] = []
        seen: set[tuple[int, int]] = set()
        for src, dst, w in edges:
            for endpoint in (src, dst):
                if endpoint not in index_of:
                    raise GameFormatError(f"unknown vertex {endpoint!r} in edge ({src!r}, {dst!r})")
            w1, w2 = w
            if not isinstance(w1, int) or not isinstance(w2, int) \
                    or isinstance(w1, bool) or isinstance(w2, bool):
                raise GameFormatError(f"non-integer weight on edge ({src!r}, {dst!r}): {w!r}")
            s, d = index_of[src], index_of[dst]
            if (s, d) in seen:
                raise GameFormatError(f"duplicate edge ({src!r}, {dst!r})")
            seen.add((s, d))
            edge_list.append(Edge(s, d, Weight2(w1, w2)))

        out: list[list[int]] = [[] for _ in ids]
        for i, e in enumerate(edge_list):
            out[e.src].append(i)
        for v, lst in enumerate(out):
            if not lst:
                raise GameFormatError(f"vertex {ids[v]!r} has no outgoing edge")

        self.ids: tuple[str, ...] = tuple(ids)
        self.owner: tuple[int, ...] = tuple(owners)
        self.edges: tuple[Edge, ...] = tuple(edge_list)
        self.index_of: dict[str, int] = index_of
        self.out: tuple[tuple[int, ...], ...] = tuple(tuple(lst) for lst in out)
        self.initial: int | None = None
        if initial is not None:
            if initial not in index_of:
                raise GameFormatError(f"unknown initial vertex {initial!r}")
            self.initial = index_of[initial]
        self._max_abs = max(max(abs(e.weight.w1), abs(e.weight.w2)) for e in self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def max_abs_weight(self) -> int:
        """Largest absolute weight component over all edges (``||E||``)."""
        return self._max_abs

    def vertices_of(self, player: int) -> list[int]:
        return [v for v in range(self.n_vertices) if self.owner[v] == player]

    def successors(self, v: int) -> list[int]:
        return [self.edges[i].dst for i in self.out[v]]

    def edge_between(self, src: int, dst: int) -> Edge | None:
        for i in self.out[src]:
            if self.edges[i].dst == dst:
                return self.edges[i]
        return None

    def is_one_player(self, player: int = P1) -> bool:
        return all(o == player for o in self.owner)

    def with_weights(self, weight_of: dict[int, tuple[int, int]]) -> "GameStructure":
        """Copy of the game with edge weights replaced (key: edge index)."""
        edges = []
        for i, e in enumerate(self.edges):
            w = weight_of.get(i, e.weight.as_pair())
            edges.append((self.ids[e.src], self.ids[e.dst], w))
        vertices = list(zip(self.ids, self.owner))
        init = self.ids[self.initial] if self.initial is not None else None
        return GameStructure(vertices, edges, init)

    def induced(self, keep: Iterable[int],
                drop_edges: Iterable[int] = ()) -> "GameStructure":
        """Induced subgame on ``keep`` (indices), minus ``drop_edges``."""
        keep_set = set(keep)
        dropped = set(drop_edges)
        vertices = [(self.ids[v], self.owner[v]) for v in sorted(keep_set)]
        edges = []
        for i, e in enumerate(self.edges):
            if i in dropped or e.src not in keep_set or e.dst not in keep_set:
                continue
            edges.append((self.ids[e.src], self.ids[e.dst], e.weight.as_pair()))
        init = None
        if self.initial is not None and self.initial in keep_set:
            init = self.ids[self.initial]
        return GameStructure(vertices, edges, init)

    def to_json_dict(self) -> dict:
        doc = {
            "vertices": [{"id": vid, "owner": own} for vid, own in zip(self.ids, self.owner)],
            "edges": [{"from": self.ids[e.src], "to": self.ids[e.dst],
                       "w": [e.weight.w1, e.weight.w2]} for e in self.edges],
        }
        if self.initial is not None:
            doc["initial"] = self.ids[self.initial]
        return doc

    def __repr__(self) -> str:
        return f"GameStructure(|V|={self.n_vertices}, |E|={self.n_edges}, W={self.max_abs_weight})"


def _parse_weight_component(x, where: str) -> int:
    # JSON strings are permitted for arbitrary-precision values.
    if isinstance(x, bool):
        raise GameFormatError(f"non-integer weight in {where}: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x, 10)
        except ValueError:
            raise GameFormatError(f"non-integer weight in {where}: {x!r}") from None
    raise GameFormatError(f"non-integer weight in {where}: {x!r}")


def parse_game(text: str) -> GameStructure:
    """Parse the JSON game format into a validated :class:`GameStructure`.

    Expected shape::

        {"vertices": [{"id": "v0", "owner": 1}, ...],
         "edges": [{"from": "v0", "to": "v1", "w": [0, -1]}, ...],
         "initial": "v0"}

    Raises :class:`GameFormatError` with a position for syntax errors and
    a description for structural errors (unknown vertex, sink vertex,
    non-integer weight, ...).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise GameFormatError("top-level JSON value must be an object")
    raw_vertices = doc.get("vertices")
    raw_edges = doc.get("edges")
    if not isinstance(raw_vertices, list) or not isinstance(raw_edges, list):
        raise GameFormatError("document must contain 'vertices' and 'edges' lists")
    vertices = []
    for item in raw_vertices:
        if not isinstance(item, dict) or "id" not in item or "owner" not in item:
            raise GameFormatError(f"malformed vertex entry: {item!r}")
        vertices.append((str(item["id"]), item["owner"]))
    edges = []
    for item in raw_edges:
        if not isinstance(item, dict) or "from" not in item or "to" not in item or "w" not in item:
            raise GameFormatError(f"malformed edge entry: {item!r}")
        w = item["w"]
        if not isinstance(w, list) or len(w) != 2:
            raise GameFormatError(f"edge weight must be a pair: {item!r}")
        where = f"edge ({item['from']!r}, {item['to']!r})"
        edges.append((str(item["from"]), str(item["to"]),
                      (_parse_weight_component(w[0], where), _parse_weight_component(w[1], where))))
    initial = doc.get("initial")
    if initial is not None:
        initial = str(initial)
    return GameStructure(vertices, edges, initial)


def load_game(path: str) -> GameStructure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_game(fh.read())


@dataclass(frozen=True)
class ObjectiveSpec:
    """One of the four decision-problem variants.

    ``mp`` selects mean-payoff-inf or -sup on dimension 2, ``cmp`` the
    strict or non-strict threshold comparison, ``threshold`` the rational
    threshold (0 after normalization).
    """

    mp: str = MP_INF
    cmp: str = STRICT
    threshold: Fraction = Fraction(0)

    def __post_init__(self):
        if self.mp not in (MP_INF, MP_SUP):
            raise ValueError(f"mp must be 'inf' or 'sup', got {self.mp!r}")
        if self.cmp not in (STRICT, NONSTRICT):
            raise ValueError(f"cmp must be 'strict' or 'nonstrict', got {self.cmp!r}")
        if not isinstance(self.threshold, Fraction):
            object.__setattr__(self, "threshold", Fraction(self.threshold))

    @property
    def is_strict(self) -> bool:
        return self.cmp == STRICT

    def compare(self, value: Fraction) -> bool:
        """Does ``value ~ threshold`` hold for this spec's comparison?"""
        if self.is_strict:
            return value > self.threshold
        return value >= self.threshold

    def to_json_dict(self) -> dict:
        return {"mp": self.mp, "cmp": self.cmp, "threshold": str(self.threshold)}


def all_objective_specs(threshold: Fraction = Fraction(0)) -> list[ObjectiveSpec]:
    """The four variants at a given threshold, in a fixed order."""
    return [ObjectiveSpec(mp, cmp, threshold)
            for mp in (MP_INF, MP_SUP) for cmp in (STRICT, NONSTRICT)]


@dataclass
class Verdict:
    """Decision outcome with certificate.

    ``answer`` is yes/no/unknown (unknown only from cap-bounded routes).
    A yes answer carries a witness certificate and, where applicable, an
    initial credit sufficient for the synthesized strategy.  A no answer
    for a two-player game carries a spoiling memoryless strategy.
    """

    answer: str
    initial_credit: int | None = None
    certificate: object | None = None
    route: str = ""

    @property
    def is_yes(self) -> bool:
        return self.answer == YES

    def to_json_dict(self) -> dict:
        cert = None
        if self.certificate is not None and hasattr(self.certificate, "to_json_dict"):
            cert = self.certificate.to_json_dict()
        return {"answer": self.answer, "initial_credit": self.initial_credit,
                "certificate": cert, "route": self.route}


def normalize_threshold(g: GameStructure, spec: ObjectiveSpec,
                        dim: int = 2) -> tuple[GameStructure, ObjectiveSpec]:
    """Rescale weights so the threshold becomes 0.

    For threshold ``a/b`` in lowest terms (b > 0) the weight ``w`` on
    ``dim`` becomes ``b*w - a`` on every edge; the decision problem is
    unchanged.  Arbitrary-precision integers make this overflow-free.
    """
    thr = spec.threshold
    if thr == 0:
        return g, spec
    a, b = thr.numerator, thr.denominator
    new_weights = {}
    for i, e in enumerate(g.edges):
        w1, w2 = e.weight.as_pair()
        if dim == 1:
            w1 = b * w1 - a
        else:
            w2 = b * w2 - a
        new_weights[i] = (w1, w2)
    return g.with_weights(new_weights), replace(spec, threshold=Fraction(0))


class PlayPrefix:
    """Finite play prefix with cached running energy levels.

    The cache stores cumulative sums per dimension so energy queries are
    O(1); index ``k`` refers to the prefix with ``k`` edges.
    """

    __slots__ = ("game", "vertices", "cum1", "cum2")

    def __init__(self, game: GameStructure, vertices: Sequence[int]):
        if not vertices:
            raise ValueError("a play prefix must contain at least one vertex")
        cum1 = [0]
        cum2 = [0]
        for a, b in zip(vertices, vertices[1:]):
            e = game.edge_between(a, b)
            if e is None:
                raise ValueError(f"no edge {game.ids[a]!r} -> {game.ids[b]!r} in the game")
            cum1.append(cum1[-1] + e.weight.w1)
            cum2.append(cum2[-1] + e.weight.w2)
        self.game = game
        self.vertices = tuple(vertices)
        self.cum1 = tuple(cum1)
        self.cum2 = tuple(cum2)

    @classmethod
    def from_ids(cls, game: GameStructure, ids: Sequence[str]) -> "PlayPrefix":
        return cls(game, [game.index_of[i] for i in ids])

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.vertices) - 1


def energy_level(p: PlayPrefix, dim: int, k: int) -> int:
    """Sum of the first ``k`` edge weights of ``p`` on dimension ``dim``."""
    cum = p.cum1 if dim == 1 else p.cum2
    if k < 0 or k >= len(p):
        raise IndexError(f"index {k} out of range for prefix of length {len(p)}")
    return cum[k]


def running_average(p: PlayPrefix, dim: int, k: int) -> Fraction:
    """Exact average weight of the first ``k`` edges on dimension ``dim``."""
    if k < 1:
        raise ValueError("running average requires k >= 1")
    return Fraction(energy_level(p, dim, k), k)


def cycle_decomposition(p: PlayPrefix) -> tuple[list[tuple[int, ...]], tuple[int, ...]]:
    """Stack-based factoring of a prefix into simple cycles plus a residue.

    Vertices are pushed in order; whenever the pushed vertex already
    appears in the stack, the stack segment from that occurrence onward is
    popped as one simple cycle (reported with first == last vertex).
    Returns ``(cycles, residual_stack)``.
    """
    stack: list[int] = []
    pos: dict[int, int] = {}
    cycles: list[tuple[int, ...]] = []
    for v in p.vertices:
        if v in pos:
            k = pos[v]
            cycle = tuple(stack[k:]) + (v,)
            for u in stack[k + 1:]:
                del pos[u]
            del stack[k + 1:]
            cycles.append(cycle)
        else:
            pos[v] = len(stack)
            stack.append(v)
    return cycles, tuple(stack)


def walk_weight(g: GameStructure, vertices: Sequence[int]) -> tuple[int, int]:
    """Total weight pair of a walk given as a vertex sequence."""
    w1 = w2 = 0
    for a, b in zip(vertices, vertices[1:]):
        e = g.edge_between(a, b)
        if e is None:
            raise ValueError(f"no edge {g.ids[a]!r} -> {g.ids[b]!r}")
        w1 += e.weight.w1
        w2 += e.weight.w2
    return w1, w2
