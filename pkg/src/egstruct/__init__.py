"""Extensive game structures: invariant rewriting, minimal forms, equivalence."""

from .model import (Game, GameError, Infoset, ValidationError,
                    ValidationReport, Violation)
from .partitions import Partition, PartitionError, finest_outcome_partition, join, refines
from .strategies import (ReducedNormalForm, ReducedStrategy, Strategy,
                         behaviorally_equivalent, enumerate_strategies,
                         kuhn_equivalent, play, reachable_infosets,
                         reduced_normal_form, reduced_strategies)
from .transforms import (CoalescingSite, SimultanizingSite, TraceStep,
                         TransformError, TransformTrace, classic_interchange,
                         coalesce, find_coalescing_sites,
                         find_simultanizing_sites, simultanize, unsimultanize)
from .reduction import (ReductionError, ReductionResult, is_minimal, minimize,
                        minimize_random_order)
from .equivalence import (EquivalenceVerdict, MethodDisagreement,
                          NormalFormIsomorphism, ReconstructionError,
                          decide_equivalence, game_isomorphic, reconstruct,
                          rnf_isomorphic)
from .generator import GeneratorConfig, generate_random
from .formats import (FormatError, export_dot, parse_egs, parse_znf,
                      serialize_egs, serialize_znf)

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "1.0.0"
