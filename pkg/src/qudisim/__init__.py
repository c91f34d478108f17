"""Hybrid qubit-qutrit circuit simulation and RGB image encoding."""

from .core import (
    MixedRadixState,
    WireSpec,
    apply_local_unitary,
    digits_to_index,
    index_to_digits,
    new_zero_state,
)
from .decompose import (
    LoweredCircuit,
    Strategy,
    ancilla_requirement,
    lower_circuit,
    lower_toffoli,
    predicted_gate_count,
)
from .encoding import (
    DecodedImage,
    RegisterLayout,
    RgbImage,
    build_encoding_circuit,
    decode,
    demo_image,
    expected_state,
    intensity_to_trits,
    layout_for,
    representation_gate_counts,
    trits_to_intensity,
)
from .compress import bitplanes, compressed_encoding_circuit, minimize_cover
from .gates import (
    Circuit,
    ControlSpec,
    GateOp,
    XVariant,
    controlled_x_matrix,
    gate_unitary,
    hadamard_matrix,
    ternary_x_matrix,
)
from .imgops import ChannelPair, channel_swap, one_channel_op
from .sim import (
    NoiseModel,
    ShotHistogram,
    circuit_unitary,
    depolarizing_kraus,
    run_exact,
    sample_shots,
)

__version__ = "0.1.0"
