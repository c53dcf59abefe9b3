"""Exact-arithmetic convolutional codes over Z_{p^r} with erasure list decoding."""

from . import files
from .codes import (
    ConvCode,
    ParityCheck,
    code_member,
    is_codeword_window,
    is_observable,
    module_member,
    preimage,
    sliding_matrix,
    synthesize_parity_check,
)
from .decoder import (
    DecodeOutcome,
    DigitStage,
    ErasurePattern,
    SequentialResult,
    WindowSystem,
    build_window_system,
    list_decode,
    materialize_list,
    oracle_decode,
    project_values,
    sequential_decode,
    try_unique_decode,
)
from .errors import (
    CapExceeded,
    ConstructionError,
    ConvringError,
    GenerationFailed,
    InvalidReceived,
    NotAUnit,
    NotLeftPrime,
    NotUnimodular,
)
from .linsolve import OPS, AffineSet, ConstMatrix, mccoy_unique, rank_mod_p, solve_mod_p
from .metrics import (
    CapabilityReport,
    DistanceReport,
    column_distance,
    distance_profile,
    erasure_capability,
    free_distance_bounded,
    hamming_weight,
)
from .polymat import (
    NEG_INF,
    Poly,
    PolyMatrix,
    SmithForm,
    adjugate,
    complete_to_unimodular,
    det,
    invert_unimodular,
    is_left_prime,
    lift_unimodular,
    rank,
    smith_form,
)
from .ring import RingContext, Zq, order, p_adic_expand, reconstruct

__all__ = [
    "AffineSet",
    "CapExceeded",
    "CapabilityReport",
    "ConstMatrix",
    "ConstructionError",
    "ConvCode",
    "ConvringError",
    "DecodeOutcome",
    "DigitStage",
    "DistanceReport",
    "ErasurePattern",
    "GenerationFailed",
    "InvalidReceived",
    "NEG_INF",
    "NotAUnit",
    "NotLeftPrime",
    "NotUnimodular",
    "OPS",
    "ParityCheck",
    "Poly",
    "PolyMatrix",
    "RingContext",
    "SequentialResult",
    "SmithForm",
    "WindowSystem",
    "Zq",
    "adjugate",
    "build_window_system",
    "code_member",
    "column_distance",
    "complete_to_unimodular",
    "det",
    "distance_profile",
    "erasure_capability",
    "free_distance_bounded",
    "hamming_weight",
    "invert_unimodular",
    "is_codeword_window",
    "is_left_prime",
    "is_observable",
    "lift_unimodular",
    "list_decode",
    "materialize_list",
    "mccoy_unique",
    "module_member",
    "oracle_decode",
    "order",
    "p_adic_expand",
    "preimage",
    "project_values",
    "rank",
    "rank_mod_p",
    "reconstruct",
    "sequential_decode",
    "sliding_matrix",
    "smith_form",
    "solve_mod_p",
    "synthesize_parity_check",
    "try_unique_decode",
]

__version__ = "0.1.0"
