"""Exact non-Archimedean Nevanlinna theory over the rationals with a p-adic valuation."""

from .valued import INF, Prime, ValuedScalar, log_abs, valuation
from .pl import InequalityCertificate, PLFunction, Verdict, VerdictKind, pl_compare
from .poly import (MultiplicityProfile, NewtonPolygon, Polynomial, newton_polygon, norm_log,
                   poly_gcd, squarefree_decompose, window_product, zeros_profile)
from .rational import RationalFunction
from .nevanlinna import (DegenerateInputError, characteristic_T, fmt_check, ldl_check,
                         nevanlinna_report, proximity_m, reduced_N, small_budget, smt_constants_check,
                         truncated_N_ge, truncated_N_le, valence_N)
from .smt import (Degeneracy, MoebiusTransform, SmallFunctionFamily, build_H, degeneracy_case,
                  lemma1_check, moebius_normalize, theorem1_check)
from .uniqueness import (Decision, SharingSpec, build_aux_T, build_Q, lemma2_check, lemma3_check,
                         sharing_set_equal, theorem2_applicable, theorem3_threshold, uniqueness_decide)
from .search import SearchConfig, counterexample_search
from .dsl import ParseError, elaborate, parse, parse_fixture

__all__ = [name for name in dir() if not name.startswith("_")]
