"""Qubit channel algebra and the non-positive local maps that make
inaccessible entanglement accessible again.

The library covers dense channel representations (superoperator, Kraus,
Choi, Pauli transfer), channel inversion and tensoring, entanglement
measures and classifiers (breaking / annihilating), and two end-to-end
protocols whose local reduced dynamics increase system entanglement while
the joint system-environment entanglement stays constant.
"""

from .channels import (
    CavityParams,
    Channel,
    GadParams,
    apply,
    cavity_channel,
    channel_from_choi,
    channel_from_kraus,
    channel_from_ptm,
    choi_view,
    compose,
    decay_probability,
    gad,
    gad_dilation_unitary,
    identity_channel,
    invert,
    invertibility_zeros,
    is_cp,
    is_tp,
    kraus_view,
    ptm_view,
    stinespring_apply,
    tensor,
    transpose_map,
)
from .entanglement import (
    EaCertificate,
    EntanglementReport,
    SearchBudget,
    concurrence,
    entanglement_report,
    inaccessible_entanglement,
    is_entanglement_annihilating,
    is_entanglement_breaking,
    negativity,
)
from .procedures import (
    PipelineStates,
    Procedure1Result,
    RegionGrid,
    TrajectoryPoint,
    conservation_audit,
    gad_region_scan,
    nonpositivity_witness,
    procedure1_trajectory,
    procedure2_channel_level,
    procedure2_stinespring,
    revival_factor,
    revival_map,
)
from .states import (
    DensityMatrix,
    PureState,
    bell_phi_plus,
    maximally_entangled,
    partial_trace,
    partial_transpose,
    random_density,
    random_pure,
    thermal_env_state,
    validate,
    werner,
)

__version__ = "0.1.0"
