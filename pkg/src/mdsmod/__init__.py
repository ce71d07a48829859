"""Link-level simulation of MDS-coded modulation (MDS-IQM and MDS-PSK)."""
from .constellation import DisjointConstellationSet, build_pam_partition, build_psk_partition, point_label
from .detect import detect_trellis, ml_exhaustive
from .errors import ConfigurationError, DegenerateChannelError, DomainError, IntegrityError
from .fec import K3, K7, ConvCode, conv_encode, viterbi_hard, viterbi_soft
from .kernels import BACKEND
from .llr import (
    LlrMethod,
    SpcMethod,
    compute_llr_frame,
    llr_index_elementwise,
    llr_optimal,
    llr_symbol_elementwise,
    spc_extrinsic,
    spc_update,
)
from .mds_code import (
    Mapping,
    MappingMode,
    Parity,
    decode_tuple,
    encode_tuple,
    enumerate_tuples,
    gray_class,
    gray_label,
    natural_class,
    natural_label,
    parity_element,
)
from .modem import (
    ModemConfig,
    Scheme,
    bits_per_codeword,
    build_sets,
    codebook,
    demap_hard,
    modulate,
    spectral_efficiency,
)
from .sim import BerRecord, Pipeline, SimConfig, run_point, run_sweep

__version__ = "0.1.0"

__all__ = [
    "DisjointConstellationSet",
    "build_pam_partition",
    "build_psk_partition",
    "point_label",
    "detect_trellis",
    "ml_exhaustive",
    "ConfigurationError",
    "DegenerateChannelError",
    "DomainError",
    "IntegrityError",
    "K3",
    "K7",
    "ConvCode",
    "conv_encode",
    "viterbi_hard",
    "viterbi_soft",
    "BACKEND",
    "LlrMethod",
    "SpcMethod",
    "compute_llr_frame",
    "llr_index_elementwise",
    "llr_optimal",
    "llr_symbol_elementwise",
    "spc_extrinsic",
    "spc_update",
    "Mapping",
    "MappingMode",
    "Parity",
    "decode_tuple",
    "encode_tuple",
    "enumerate_tuples",
    "gray_class",
    "gray_label",
    "natural_class",
    "natural_label",
    "parity_element",
    "ModemConfig",
    "Scheme",
    "bits_per_codeword",
    "build_sets",
    "codebook",
    "demap_hard",
    "modulate",
    "spectral_efficiency",
    "BerRecord",
    "Pipeline",
    "SimConfig",
    "run_point",
    "run_sweep",
]
