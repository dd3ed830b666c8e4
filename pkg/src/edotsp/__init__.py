"""Entropy-based evolutionary diversity optimisation for TSP tours."""
from .baselines import DiffMatrix, edge_diversity, pairwise_distance
from .ea import EaConfig, Population, RunRecord, run, step, trace_csv
from .entropy import EntropyBounds, EntropyValue, entropy, entropy_bounds, entropy_delta
from .errors import (
    ConfigError,
    ConsistencyError,
    DecodeError,
    InstanceError,
    InvalidMoveError,
    MipSizeError,
    TsplibError,
)
from .experiment import ExperimentSpec, SummaryRow, emit_edge_frequencies, run_experiment
from .instance import Instance, OptimumInfo, bundled, load_instance, parse_tsplib, unit_graph
from .mip import MipModel, OracleResult, brute_force_oracle, build_mip, ingest_solution, write_lp
from .mutation import biased_two_opt, classic_two_opt, dual_offspring, make_rng
from .segments import SegmentTable, build_table, extract_segments, move_delta, summarise
from .tour import Tour, TwoOptMove, apply_two_opt

__version__ = "0.1.0"
