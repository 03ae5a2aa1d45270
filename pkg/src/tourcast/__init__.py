"""Concert tour scheduling: tour construction and simulated annealing under a relaxed cost."""

from pathlib import Path

from .anneal import SAParams, cost_of, simulated_annealing
from .constraints import Evaluation, ViolationReport, evaluate, is_strictly_feasible
from .construct import PlacementOverflow, construct_initial
from .cost import CostBreakdown, relaxed_cost, strict_cost
from .ingest import GeneratorParams, generate_random_instance, load_instance_dir, parse_instance
from .model import AvailabilityCode, Instance, Objectives, Penalties, Weekday, Weights, is_complete
from .oracle import brute_force_best

__version__ = "0.1.0"


def sample_dir() -> Path:
    """Directory of the bundled 15-city, 42-day sample instance."""
    return Path(__file__).parent / "data" / "sample"


def load_sample() -> Instance:
    return load_instance_dir(sample_dir())
