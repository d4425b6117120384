"""shaderevo: an engine-independent workbench that evolves GPU shaders under
interactive human selection.

Genomes are typed dataflow graphs (forests of subtrees feeding one master
node) that compile deterministically to GLSL ES 3.00; variation operators
preserve feasibility; a steady-state loop breeds under thumbs-up/down
scoring served over HTTP to a browser client.
"""

from .catalog import NodeSpec, SemanticType, SlotSpec, list_kinds, lookup, resolve_dynamic
from .codegen import ShaderBundle, compile
from .errors import ShaderEvoError
from .evolution import (
    EvolutionConfig,
    Individual,
    Population,
    breed,
    save_individual,
    select_parents_tournament,
    set_score,
    start_run,
)
from .genetics import (
    MutationConfig,
    MutationStrength,
    crossover,
    mutate,
    random_genome,
)
from .graph import Genome, NodeInstance, ValidationReport
from .interpreter import EvalContext, InterpResult, interpret, shade, shade_genome
from .persistence import (
    load_population,
    parse_genome,
    serialize_genome,
    write_population,
)

__version__ = "0.1.0"

__all__ = [
    "EvalContext",
    "EvolutionConfig",
    "Genome",
    "Individual",
    "InterpResult",
    "MutationConfig",
    "MutationStrength",
    "NodeInstance",
    "NodeSpec",
    "Population",
    "SemanticType",
    "ShaderBundle",
    "ShaderEvoError",
    "SlotSpec",
    "ValidationReport",
    "breed",
    "compile",
    "crossover",
    "interpret",
    "list_kinds",
    "load_population",
    "lookup",
    "mutate",
    "parse_genome",
    "random_genome",
    "resolve_dynamic",
    "save_individual",
    "select_parents_tournament",
    "serialize_genome",
    "set_score",
    "shade",
    "shade_genome",
    "start_run",
    "write_population",
]
