"""Shared fixtures and random-instance generation for the test suite.

All randomness is seeded: given the same seed the generated instances are
byte-identical, which the determinism acceptance criterion relies on.
"""

from __future__ import annotations

import random

from empg.core import P1, P2, GameStructure


def fig3_game() -> GameStructure:
    """The finite-memory introductory example (one player)."""
    return GameStructure(
        [("v0", P1), ("v1", P1)],
        [("v0", "v0", (1, -1)), ("v0", "v1", (0, -1)),
         ("v1", "v1", (-1, 3)), ("v1", "v0", (0, -1))],
        "v0")


def fig4_game() -> GameStructure:
    """The infinite-memory introductory example (one player)."""
    return GameStructure(
        [("v0", P1), ("v1", P1)],
        [("v0", "v0", (1, -1)), ("v0", "v1", (0, -1)),
         ("v1", "v1", (-1, 1)), ("v1", "v0", (0, -1))],
        "v0")


def fig5_game(w: int) -> GameStructure:
    """The pseudo-polynomial-memory lower-bound family, ||E|| = w."""
    return GameStructure(
        [("v0", P1), ("v1", P1)],
        [("v0", "v1", (w, -w)), ("v1", "v0", (w, -w)), ("v1", "v1", (-1, 1))],
        "v0")


def random_game(rng: random.Random, max_vertices: int = 6, weight: int = 3,
                two_player: bool = True, max_out: int = 3) -> GameStructure:
    """Random game structure; out-degrees 1..max_out, weights in [-weight, weight]."""
    n = rng.randint(2, max_vertices)
    names = [f"v{i}" for i in range(n)]
    vertices = []
    for i in range(n):
        owner = P2 if two_player and rng.random() < 0.35 else P1
        vertices.append((names[i], owner))
    edges = []
    for i in range(n):
        deg = rng.randint(1, min(max_out, n))
        targets = rng.sample(range(n), deg)
        for t in targets:
            edges.append((names[i], names[t],
                          (rng.randint(-weight, weight), rng.randint(-weight, weight))))
    return GameStructure(vertices, edges, "v0")


def random_one_player_game(rng: random.Random, max_vertices: int = 6,
                           weight: int = 3) -> GameStructure:
    return random_game(rng, max_vertices, weight, two_player=False)
