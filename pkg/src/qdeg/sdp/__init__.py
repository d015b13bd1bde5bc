"""Conic programming layer: problem builder, interior-point solver, channel programs."""

from .problem import HermitianModel, SdpProblem, dump_triplets, presolve
from .solver import SdpSolution, solve_sdp

__all__ = ["HermitianModel", "SdpProblem", "SdpSolution", "dump_triplets", "presolve", "solve_sdp"]
