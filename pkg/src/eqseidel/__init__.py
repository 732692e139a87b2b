"""Exact computations with equivariant quantum products, Seidel maps and their limits."""

from .catalog import builtin, load_space, parse_space, render_space
from .errors import EngineError
from .limit import generator_sequence, nonequivariant_limit, normalized_generators
from .module import BasisSpec, GradedMap, ModuleElem
from .ring import CoeffDomain, RingConfig, RingElem
from .seidel import SeidelFamily, intertwining_residual, seidel_instantiate, weighted_seidel
from .solver import induct_over_r
from .zhao import build_complex, cohomology, continuation_action

__all__ = [
    "BasisSpec",
    "CoeffDomain",
    "EngineError",
    "GradedMap",
    "ModuleElem",
    "RingConfig",
    "RingElem",
    "SeidelFamily",
    "build_complex",
    "builtin",
    "cohomology",
    "continuation_action",
    "generator_sequence",
    "induct_over_r",
    "intertwining_residual",
    "load_space",
    "nonequivariant_limit",
    "normalized_generators",
    "parse_space",
    "render_space",
    "seidel_instantiate",
    "weighted_seidel",
]
