"""Monte Carlo simulations and the command-line interface."""

from .simulate import (
    SimConfig,
    SimResult,
    sim_butterfly,
    sim_codec,
    sim_decodable_curve,
    sim_delay,
    sim_independent_curve,
)
