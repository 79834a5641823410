"""Opportunistic beamforming with wirelessly powered 1-bit feedback."""
from .analytic import AnalyticInputs, beam_outage, beam_outage_asymptotic, sinr_cdf
from .config import SystemParams, dump_config, parse_config
from .energy import Combiner
from .sim import Coupling, OutageEstimate, Scheme, SimMode, estimate_outage, run_trial
from .sweep import SweepRow, emit_csv, run_sweep

__all__ = [
    "AnalyticInputs", "beam_outage", "beam_outage_asymptotic", "sinr_cdf",
    "SystemParams", "dump_config", "parse_config", "Combiner",
    "Coupling", "OutageEstimate", "Scheme", "SimMode", "estimate_outage", "run_trial",
    "SweepRow", "emit_csv", "run_sweep",
]
