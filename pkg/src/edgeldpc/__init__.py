"""Edge-parallel sum-product LDPC decoding with an AWGN BER simulator."""

from .channel import (
    BerPoint,
    ber_csv,
    ber_sweep,
    box_muller,
    ebno_to_sigma2,
    transmit_all_zero,
)
from .codes import (
    CodeFormatError,
    CodeInfo,
    ParityCheckMatrix,
    generate_gallager_code,
    load_code,
    parse_alist,
    parse_dense,
    serialize_alist,
    serialize_dense,
)
from .engine import (
    PagePlan,
    ParallelDecoder,
    SharedDecodeState,
    parallel_decode_awgn,
    parallel_estimate,
    parallel_syndrome,
    parallel_to_check,
    parallel_to_variable,
    plan_pages,
)
from .rng import RngState, derive_state, rng_next, rng_uniform01
from .serial import (
    DecodeResult,
    MessageState,
    decode_awgn,
    estimate,
    initialize,
    priors_awgn,
    syndrome,
    values_to_check,
    values_to_variable,
)
from .tables import CodeTables, EdgeTables, build_check_tables, build_variable_tables

__version__ = "0.1.0"

__all__ = [
    "BerPoint",
    "CodeFormatError",
    "CodeInfo",
    "CodeTables",
    "DecodeResult",
    "EdgeTables",
    "MessageState",
    "PagePlan",
    "ParallelDecoder",
    "ParityCheckMatrix",
    "RngState",
    "SharedDecodeState",
    "ber_csv",
    "ber_sweep",
    "box_muller",
    "build_check_tables",
    "build_variable_tables",
    "decode_awgn",
    "derive_state",
    "ebno_to_sigma2",
    "estimate",
    "generate_gallager_code",
    "initialize",
    "load_code",
    "parallel_decode_awgn",
    "parallel_estimate",
    "parallel_syndrome",
    "parallel_to_check",
    "parallel_to_variable",
    "parse_alist",
    "parse_dense",
    "plan_pages",
    "priors_awgn",
    "rng_next",
    "rng_uniform01",
    "serialize_alist",
    "serialize_dense",
    "syndrome",
    "transmit_all_zero",
    "values_to_check",
    "values_to_variable",
]
