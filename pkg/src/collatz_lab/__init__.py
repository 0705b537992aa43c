"""Collatz dynamics for consecutive pairs and Garner's stem conjecture."""

from .core import (ArithmeticOverflowError, CollatzError, HeightCache, MapKind,
                   NonConvergenceError, Trajectory, build_height_cache, c_step,
                   height, t_step, trajectory)
from .pairs import (PairAnalysis, analyze_pair, coincidence, merged_suffix_length,
                    mod8_compliance, pre_coincidence_values, theorem_8k4_check)
from .parity import (AffineMap, ParityVector, affine_apply, affine_of_vector,
                     compress_c_to_t, expand_t_to_c, parity_prefix, parity_vector,
                     terras_decode, terras_encode)
from .scanner import (FamilyReport, ScanReport, counterexample_ratio, emit_heights,
                      first_counterexample, scan_range, verify_family)
from .stems import (StemPair, StemVerdict, decide_all_x, garner_stem, is_block_prefix,
                    is_corresponding_stem_pair, tail_stem_index)

__version__ = "0.1.0"
