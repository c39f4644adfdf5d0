"""Exact stochastic calculus and viability analysis on finite filtered bases.

The package decides, in exact rational arithmetic, whether market
viability survives an enlargement of the information flow: it computes
drift operators, factors them through a multiplier against the driving
process, transfers structure connectors between filtrations, builds
local martingale deflators, and cross-validates every verdict against an
independent linear-feasibility oracle.
"""

from .basis import (Diagnostics, Filtration, Partition, Process, SampleSpace,
                    StoppingTime, classify_stopping_time, cond_expect, cond_prob,
                    is_stopping_time, validate)
from .calculus import (bracket, canonical_decomposition, comp_bracket, compensator,
                       doleans_exp, is_martingale, martingale_violation,
                       pointwise_mul, stoch_integral, stop)
from .enlargement import (DriftFactors, EnlargedBasis, SupportReport,
                          check_condition_support, check_positivity,
                          compensator_transfer_check, drift_operator,
                          factorization_check, solve_factors, tilde,
                          validate_enlargement)
from .errors import (AzemaDegenerate, BadGrid, BadProbability, ConnectorInvalid,
                     DataInvariantViolated, DimensionMismatch, EngineError,
                     FactorsMissing, JacodDegenerate, NotAMartingale, NotARandomTime,
                     NotAStoppingTime, NotAdapted, NotPredictable, RefinementBroken,
                     SchemaError, SupportConditionFailed, Unsolvable,
                     ZeroProbabilityBranch)
from .event_kernels import (AccessibleEventData, InaccessibleEventData,
                            accessible_jump_value, continuous_part_integrand,
                            inaccessible_jump_value, quotient_identity_holds,
                            reduced_equation_holds, series_diagnostics,
                            validate_accessible, validate_inaccessible)
from .models import (GeneratorConfig, azema_phi_crosscheck, gen_initial_enlargement,
                     gen_progressive_enlargement, gen_random_instance,
                     gen_single_filtration, jacod_density_table,
                     jacod_phi_crosscheck, random_viable_asset,
                     tilted_component_assets, worked_four_point, worked_six_point)
from .oracle import OracleResult, check_deflator, lp_deflator_oracle, verify_no_deflator
from .rational import ONE, ZERO, Q, rat, rat_str
from .representation import RepresentationProcess, build_representation, represent
from .verify import run_verify
from .viability import (ConnectorSearch, ViabilityReport, deflator_from_connector,
                        enlarged_connector, find_structure_connector,
                        full_viability_verdict, g_connector, is_structure_connector,
                        jump_identity_check, solve_accessible_K, witness_asset)

__version__ = "0.1.0"
