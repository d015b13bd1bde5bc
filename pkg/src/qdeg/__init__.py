"""Approximate degradability of quantum channels and capacity upper bounds."""

from .capacity import CapacityBounds, capacity_bounds, channel_coherent_information, u_xi
from .channels import (
    ChoiMatrix,
    QuantumChannel,
    apply,
    channel_from_choi,
    channel_from_kraus,
    choi,
    complementary,
    compose,
    tensor,
)
from .errors import QdegError
from .sdp.programs import (
    DegradabilityReport,
    diamond_norm_distance,
    epsilon_antidegradable,
    epsilon_degradable,
)

__version__ = "0.1.0"
