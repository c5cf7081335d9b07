"""empg: solver, synthesizer and simulator for energy mean-payoff games."""

from .core import (GameStructure, GameFormatError, GuardError, EmpgError,
                   ObjectiveSpec, PlayPrefix, Verdict, Weight2,
                   all_objective_specs, cycle_decomposition, energy_level,
                   load_game, normalize_threshold, parse_game,
                   running_average, MP_INF, MP_SUP, NONSTRICT, STRICT,
                   P1, P2, YES, NO, UNKNOWN)
from .graph import (MooreStrategy, SccDecomposition, enumerate_memoryless,
                    enumerate_simple_cycles, moore_minimize, product,
                    reachable_subgraph, sccs)
from .cycles import (CycleWitness, MulticycleWitness, combine_coefficients,
                     good_cycle_exists, good_multicycle_exists,
                     witness_loop_counts, zero_multicycle_exists)

__all__ = [name for name in dir() if not name.startswith("_")]
