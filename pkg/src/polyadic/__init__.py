"""Polynomial adic systems.

Exact tower combinatorics over the graded graph of an integer polynomial,
the adic successor map, the one-parameter family of invariant Bernoulli
measures, ergodic partial-sum fluctuation curves, and the generalized Takagi
functions describing their limits.
"""

from .errors import (CapacityError, DegenerateCurve, DivisionByZeroJet,
                     HorizonExhausted, MaximalPath, MinimalPath, NoConvergence,
                     NoRoot, PolyadicError, PrefixExhausted, RankOutOfRange)
from .poly import (DimTable, GenPolynomial, build_dim_table, is_unimodal,
                   max_adjacent_ratio, ratio_constant, unimodal_start)
from .paths import (LetterTable, PathPrefix, co_kappa, is_maximal, is_minimal,
                    iter_tower, kappa, letter_table, maximal_word,
                    minimal_word, predecessor, prefix_walk, rank, successor,
                    unrank, word_from_string, word_to_string)
from .measure import (CodingParams, MeasureParams, coding_params,
                      cylinder_measure, decode_digits, encode_theta,
                      letter_stream, letter_weights, measure_params,
                      sample_word, solve_t, stationary_points,
                      weight_residual)
from .ergodic import (CylFunction, HCoeffs, PolygonalCurve, brute_tower_sums,
                      central_vertex, cohomology_verdict, curve_value,
                      extract_limiting_curve, fluctuation_curve, h_coeffs,
                      measure_ray, node_grid, partial_sum, partial_sum_exact,
                      stabilizing_candidates, sup_distance, tower_total)
from .takagi import (MIRROR_SIGN, Jet, coding_map, depth_for, jet_const,
                     jet_var, parabola_profile, self_affinity_residual,
                     t_jet, t_prime_closed_form, takagi_function)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
