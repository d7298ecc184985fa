"""Rotation-minimizing packed-HE linear algebra over a metered mock backend.

Implements the rotation-heavy building blocks of private neural-network
inference (dot products and convolutions over packed ciphertexts) in four
matrix-vector variants and two MIMO convolution variants, with exact
operation counting, noise tracking under the standard recurrences, additive
share generation, closed-form analytics, and a network-level profiler.
"""

__version__ = "0.1.0"

from .analytics import (
    OpCounts,
    count_conv,
    count_mv,
    estimate_time,
    predict_noise,
)
from .backend import (
    CostMeter,
    CostModel,
    HEParams,
    MockCiphertext,
    RotationGroup,
    decrypt,
    encrypt,
    he_add,
    he_decperm,
    he_hstperm,
    he_perm,
    he_scmult,
    load_cost_config,
    subtract_plain,
)
from .conv import (
    ConvTask,
    OffsetMask,
    build_offset_masks,
    encode_channel_blocks,
    encrypt_inputs,
    mimo_kernel_grouping,
    mimo_output_rotation,
    siso_conv,
    unpack_channels,
)
from .errors import (
    DimensionError,
    GalaError,
    NetworkParseError,
    NoiseOverflowError,
    ParameterError,
)
from .matvec import (
    MvOutcome,
    MvTask,
    column_blocks,
    embed_input,
    encode_gala_weights,
    mv_diagonal,
    mv_gala,
    mv_hybrid_gazelle,
    mv_naive,
    pack_input,
    run_mv,
)
from .oracle import conv2d_mod_p, dot_mod_p
from .profiler import (
    LayerSpec,
    ProfileReport,
    load_network,
    parse_network,
    profile_network,
    shipped_networks,
)
from .ring import SlotVector, fold_ras, pointwise, read_slots, rotate_left
from .sharing import SharePair, finalize_shares, gen_additive_share

__all__ = [
    "__version__",
    "SlotVector", "rotate_left", "pointwise", "fold_ras", "read_slots",
    "HEParams", "CostModel", "CostMeter", "MockCiphertext", "RotationGroup",
    "encrypt", "decrypt", "he_add", "he_scmult", "he_perm", "he_decperm",
    "he_hstperm", "subtract_plain", "load_cost_config",
    "MvTask", "MvOutcome", "mv_naive", "mv_diagonal", "mv_hybrid_gazelle",
    "mv_gala", "encode_gala_weights", "pack_input", "embed_input",
    "column_blocks", "run_mv",
    "ConvTask", "OffsetMask", "build_offset_masks", "siso_conv",
    "mimo_output_rotation", "mimo_kernel_grouping", "encode_channel_blocks",
    "encrypt_inputs", "unpack_channels",
    "SharePair", "gen_additive_share", "finalize_shares",
    "OpCounts", "count_mv", "count_conv", "predict_noise", "estimate_time",
    "dot_mod_p", "conv2d_mod_p",
    "LayerSpec", "parse_network", "load_network", "profile_network",
    "ProfileReport", "shipped_networks",
    "GalaError", "DimensionError", "ParameterError", "NoiseOverflowError",
    "NetworkParseError",
]
