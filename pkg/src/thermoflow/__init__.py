"""Thermodynamic formalism for shifts of finite type and their suspension flows."""

from .bowen import BowenProblem, BowenSolution, pressure_at, solve
from .errors import ThermoflowError
from .model import ModelFile, parse, read_model
from .perturbation import (
    PerturbationReport,
    almost_equilibria,
    fiber_target,
    in_L,
    normalize_lemma1,
    perturb_fiber,
    perturb_roof,
    zero_pressure_roof,
)
from .potential import LcPotential, Roof, combine, sup_dist, sup_norm, variation
from .pressure import (
    MarkovMeasure,
    PressureResult,
    entropy,
    equilibrium,
    integrate,
    pressure_oracle_orbits,
    pressure_oracle_variational,
    recode_two_block,
    topological_entropy,
)
from .sft import Sft, full_shift, golden_mean, periodic_point_count, validate, words
from .suspension import (
    FiberPotential,
    FlowMeasure,
    abramov_entropy,
    delta_transform,
    flow_entropy,
    flow_mme,
    flow_pressure,
    kac_integral,
    lift,
    reparam_distance,
)

__version__ = "0.1.0"
