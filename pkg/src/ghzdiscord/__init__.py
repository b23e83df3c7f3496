"""Global and geometric quantum discord of GHZ-type states under local decoherence."""
from .channels import ChannelKind, KrausChannel, apply, apply_sequential, kraus_set, lift
from .discord import (
    DiscordResult,
    dephase,
    global_qd,
    global_qd_at,
    gqd_closed_form,
    gqd_entropic,
    gqd_hs,
    gqd_hs_at,
    measurement_basis,
    von_neumann_entropy,
)
from .optimize import OptimizerConfig
from .qmatrix import DensityMatrix, hermitian_eigenvalues, hs_norm_sq, partial_trace, tensor
from .states import StateFamily, StateKind, acceleration_to_r, rindler_tripartite, werner_ghz

__version__ = "0.1.0"
