"""Gaussian-channel models of microwave-optical quantum transduction.

The package simulates a piezo-optomechanical transducer as a Gaussian
quantum channel and compares direct conversion against teleportation over
the device's entangled output, including microwave-microwave entanglement
swapping between two devices.  Everything uses the hbar = 2 convention with
vacuum covariance equal to the identity.
"""

from .capacity import (
    BosonicChannelKind,
    FrequencyQuadrature,
    dqt_capacity_boundary,
    g_function,
    q_lb_bandwidth_integrated,
    q_lb_displacement,
    q_lb_loss_amp,
)
from .entanglement import (
    EofIntermediates,
    duan_quantity,
    entanglement_of_formation,
    entanglement_rate,
    eof_intermediates,
)
from .gaussian import (
    GaussianChannelSpec,
    GaussianState,
    apply_channel,
    characteristic_at,
    extract_modes,
    general_dyne_condition,
    homodyne_epr_limit,
    symplectic_eigenvalues,
    symplectic_form,
    tensor,
    thermal_state,
    two_mode_squeezed,
    vacuum_state,
    validate_channel,
    wigner_at,
)
from .swap import (
    SwapSetup,
    apply_optical_loss,
    click_rate,
    mm_capacity,
    mm_standard_form,
    mm_swap_closed,
    mm_swap_numeric,
)
from .teleport import GainSearchResult, induced_channel, optimize_gain, teleport_oracle
from .transducer import (
    DqtChannelPoint,
    TransducerParams,
    TwoModeStandardForm,
    cooperativities,
    dqt_channel,
    dqt_efficiency_bandwidth,
    output_mo_covariance,
    quadrature_scattering,
    scattering_blue,
    scattering_red,
    stability_check,
)

__version__ = "0.1.0"

__all__ = [
    "BosonicChannelKind",
    "DqtChannelPoint",
    "EofIntermediates",
    "FrequencyQuadrature",
    "GainSearchResult",
    "GaussianChannelSpec",
    "GaussianState",
    "SwapSetup",
    "TransducerParams",
    "TwoModeStandardForm",
    "apply_channel",
    "apply_optical_loss",
    "characteristic_at",
    "click_rate",
    "cooperativities",
    "dqt_capacity_boundary",
    "dqt_channel",
    "dqt_efficiency_bandwidth",
    "duan_quantity",
    "entanglement_of_formation",
    "entanglement_rate",
    "eof_intermediates",
    "extract_modes",
    "g_function",
    "general_dyne_condition",
    "homodyne_epr_limit",
    "induced_channel",
    "mm_capacity",
    "mm_standard_form",
    "mm_swap_closed",
    "mm_swap_numeric",
    "optimize_gain",
    "output_mo_covariance",
    "q_lb_bandwidth_integrated",
    "q_lb_displacement",
    "q_lb_loss_amp",
    "quadrature_scattering",
    "scattering_blue",
    "scattering_red",
    "stability_check",
    "symplectic_eigenvalues",
    "symplectic_form",
    "tensor",
    "teleport_oracle",
    "thermal_state",
    "two_mode_squeezed",
    "vacuum_state",
    "validate_channel",
    "wigner_at",
]
