"""Circuit-depth bounds for QAOA encodings of 3-SAT.

The package compares two routes from a 3-SAT instance to a quadratic
unconstrained binary objective and the one-layer circuit depth each implies:

* a linearized encoding with per-clause ancillas, dualized with a penalty
  multiplier, and
* the native cubic product encoding, reduced to quadratic by substituting
  products of variable pairs, where the choice of pairs is itself an
  optimization problem (solved exactly as an integer program or by a
  randomized greedy heuristic).

Depth is read off the interaction graph: color its edges so that no two
touching edges share a color, run one gate layer per color, and add one
mixer layer.
"""

from .pubo import (
    InteractionGraph,
    MissingVariableError,
    Polynomial,
    UnknownVertexError,
    VarId,
    interaction_graph,
)

__all__ = [
    "InteractionGraph",
    "MissingVariableError",
    "Polynomial",
    "UnknownVertexError",
    "VarId",
    "interaction_graph",
]

__version__ = "0.1.0"
