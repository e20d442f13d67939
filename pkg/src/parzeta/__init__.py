"""Exact partial zeta functions of affine varieties over finite fields."""

from .fields import Field, FieldElement, build_field, field, smallest_irreducible
from .polys import (MorphismSpec, PolyParseError, SparsePoly, VarietySpec,
                    base_field, parse_poly)
from .counting import (BudgetExceededError, CountTable, DEFAULT_BUDGET,
                       classical_count, count_table, partial_count)
from .zeta import (AutoReconstructError, NoSolutionError, NonIntegerError,
                   RationalFunctionZ, ReconstructionError,
                   ReconstructionResult, RootFindingError, TruncatedSeries,
                   WeightReport, auto_reconstruct, degree_sweep,
                   pade_reconstruct, series_from_counts, weil_weight_check)
from .faltings import (FaltingsSpec, LemmaReport, build_faltings,
                       fixed_point_count, fixed_points, h_index, lemma_check,
                       sigma_apply, variety_points)
from .graphs import (GraphEdge, GraphReport, GraphSystem, GraphVertex,
                     fibred_product_reduce, graph_count_direct,
                     reduction_check)
from .artin_schreier import (ASInstance, BoundReport, OracleMismatchError,
                             as_count_brute, as_count_trace, bound_check,
                             diagonal_smooth_check, example44_sweep,
                             fibred_sum, singular_search)

__version__ = "0.1.0"
