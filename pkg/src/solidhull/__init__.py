"""Solid hulls of weighted spaces of analytic functions with weights exp(-a/(1-r)**b)."""
from ._accel import BACKEND, set_threads
from .asymptotics import (ExpansionCheck, direct_norm_polynomial, order_fit,
                          verify_proof_bounds, verify_radius_ratio, verify_rm_expansion,
                          verify_weight_ratio)
from .blocks import (BlockMode, BlockScheme, FrameReport, block_index, build_scheme,
                     check_frame_condition, frame_quantities)
from .critical import (CriticalRadius, asymptotic_gaps, critical_gaps, critical_radius,
                       critical_radius_asymptotic, log_monomial_peak)
from .errors import (DomainError, ParseError, RangeError, SolverError,
                     UnsupportedOrderError, ValidationError)
from .hull import (BlockNormProfile, ExplicitFormSpec, canonical_block_norm,
                   compare_canonical_vs_explicit, explicit_block_norm, hull_norm_profile,
                   membership_diagnostic)
from .multipliers import (BlockSpaceSpec, apply_multiplier, balanced_multiplier,
                          block_pq_norm, multiplier_check, multiplier_target)
from .sequences import (CoefficientSequence, extremal_block_sequence, ingest,
                        random_sequence, serialize)
from .weights import (DerivedConstants, ExpWeightParams, block_scale, derived_constants,
                      log_weight, make_params, weight)

__version__ = "0.1.0"
