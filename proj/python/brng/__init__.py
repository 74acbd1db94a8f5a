"""Brillouin-laser random bit generator: simulation, calibration and testing."""

import json as _json

from . import _core
from ._core import PhysicalParams, reference_params, __version__

__all__ = [
    "PhysicalParams",
    "reference_params",
    "params_from_config",
    "derived_rates",
    "thresholds",
    "regime_report",
    "bistable_window",
    "steady_states",
    "simulate",
    "empirical_distribution",
    "analyze_modes",
    "find_boundary",
    "occupancy",
    "dwell_times",
    "evaluate_operating_point",
    "balance_pump",
    "sampling_frequency",
    "generate_bits",
    "export_bits",
    "import_bits",
    "nist_test",
    "nist_suite",
    "nist_table",
]


def _wrap(name):
    fn = getattr(_core, name)

    def call(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    call.__name__ = name
    call.__doc__ = fn.__doc__
    return call


def params_from_config(config):
    """PhysicalParams from a parameter dict in the 2pi-GHz convention."""
    return _core.params_from_config(_json.dumps(config))


derived_rates = _wrap("derived_rates")
thresholds = _wrap("thresholds")
regime_report = _wrap("regime_report")
steady_states = _wrap("steady_states")
analyze_modes = _wrap("analyze_modes")
occupancy = _wrap("occupancy")
dwell_times = _wrap("dwell_times")
evaluate_operating_point = _wrap("evaluate_operating_point")
nist_test = _wrap("nist_test")
nist_suite = _wrap("nist_suite")
bistable_window = _core.bistable_window
simulate = _core.simulate
empirical_distribution = _core.empirical_distribution
find_boundary = _core.find_boundary
sampling_frequency = _core.sampling_frequency
nist_table = _core.nist_table


def balance_pump(params, omega2=0.0, bracket=None, seed=0, **options):
    """Balanced pump amplitude; returns a dict usable by generate_bits."""
    return _json.loads(_core.balance_pump(params, omega2, bracket, seed, _json.dumps(options)))


def generate_bits(params, balance, n_bits, seed=0, **options):
    """(bits as a uint8 array, metadata dict) sampled at the calibrated rate."""
    bits, meta = _core.generate_bits(params, _json.dumps(balance), n_bits, seed, _json.dumps(options))
    return bits, _json.loads(meta)


def export_bits(path, bits, fmt="packed", **meta):
    _core.export_bits(str(path), bits, fmt, _json.dumps(meta))


def import_bits(path):
    bits, meta = _core.import_bits(str(path))
    return bits, _json.loads(meta)
