"""Linear-threshold recurrent networks, fixed-point search and feed-forward
distillation. Thin wrapper over the compiled ``_core`` module."""

import json

from ._core import (
    ComputationError,
    FeedForwardNet,
    RecurrentNet,
    analytic_partition_fixed_point,
    eigenvalues,
    gen_partition_net,
    gen_random_net,
    gen_ring_net,
    init_ffnet,
    preset_names,
    ring_input,
    stability_report,
)
from . import _core

__all__ = [
    "ComputationError",
    "FeedForwardNet",
    "RecurrentNet",
    "analytic_partition_fixed_point",
    "eigenvalues",
    "find_fixed_point",
    "gen_partition_net",
    "gen_random_net",
    "gen_ring_net",
    "init_ffnet",
    "integrate",
    "preset_config",
    "preset_names",
    "ring_input",
    "run_preset",
    "stability_report",
    "train",
]


def _fixed_point_config(overrides):
    if not overrides:
        return ""
    cfg = json.loads(_core._default_fixed_point_config())
    cfg.update(overrides)
    return json.dumps(cfg)


def find_fixed_point(net, input, **config):
    """Fixed point reached from x(0) = input. Keyword arguments override the
    search settings (delta, t_limit, ...). Returns a dict with the verdict."""
    return _core._find_fixed_point(net, list(input), _fixed_point_config(config))


def integrate(net, x0, input, t_end, **config):
    """Trajectory as (times, states)."""
    return _core._integrate(net, list(x0), list(input), t_end, _fixed_point_config(config))


def train(net, ff0=None, sampler=None, adam=None, fixed_point=None, **train_config):
    """Distil `net` into a feed-forward net. `sampler` is a dict such as
    {"type": "uniform", "n": 2, "lo": -1, "hi": 1, "driven": 2}. Returns
    (best_net, report)."""
    n = net.size
    if ff0 is None:
        ff0 = init_ffnet(n, train_config.get("seed", 0))
    if sampler is None:
        sampler = {"type": "uniform", "n": n, "lo": -1.0, "hi": 1.0, "driven": n}
    tcfg = json.loads(_core._default_train_config())
    tcfg.update(train_config)
    acfg = json.loads(_core._default_adam_config())
    acfg.update(adam or {})
    return _core._train(net, ff0, json.dumps(sampler), json.dumps(tcfg), json.dumps(acfg),
                        _fixed_point_config(fixed_point))


def preset_config(name, overrides=None):
    """Effective configuration of a preset after deep-merging `overrides`."""
    return json.loads(_core._preset_config(name, json.dumps(overrides or {})))


def run_preset(name, overrides=None):
    """Run a preset end to end. Reports come back as CSV text plus summaries."""
    cfg = json.dumps(preset_config(name, overrides))
    out = _core._run_preset(name, cfg)
    out["summary"] = json.loads(out["summary"])
    return out
