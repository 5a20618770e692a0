"""Guess-and-test decoding for additive symmetric alpha-stable noise channels.

Library + CLI: alpha-stable numerics (density, sampling, LLRs), CRC and
CRC-aided polar code construction, the ORBGRAND / SGRAND / EDGE decoder
family, and a Monte Carlo link-level harness producing BER/BLER sweeps.
"""

from .noise import (
    LlrCurve,
    StableAccuracyError,
    StableParams,
    build_llr_curve,
    calibrate_gamma,
    cdf,
    char_fn,
    equivalent_sigma,
    equivalent_snr_db,
    llr_approx,
    llr_exact,
    pdf,
    sample,
)
from .gf2 import Gf2Solution, gf2_solve
from .codes import BinaryCode, build_capolar_code, build_crc_code, polar_transform
from .decoders import (
    DecodeOutcome,
    DecoderConfig,
    ErasureSet,
    SoftBlock,
    erase_by_llr,
    erase_by_soft,
    grand_edge,
    make_soft_block,
    orbgrand,
    orbgrand_patterns,
    sgrand,
)
from .simulate import (
    BlerPoint,
    SweepSpec,
    bpsk_map,
    delta_sensitivity,
    rank_llr_export,
    run_point,
    sweep,
)

__version__ = "0.1.0"
