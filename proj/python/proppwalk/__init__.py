"""Exact simulation of the one-dimensional Propp machine."""

from ._core import (
    H,
    ConfigError,
    Configuration,
    ForcingError,
    ParseError,
    ResourceLimitError,
    c1_bracket,
    disc_box,
    disc_space,
    disc_time,
    disc_vertex,
    disc_via_splits,
    force,
    gen_l2_random,
    gen_space_lb,
    gen_time_lb,
    gen_vertex_lb,
    inf,
    inf_time_partial_sum,
    l2_average,
    run_cli,
    simulate,
    t_max,
)

__all__ = [
    "H",
    "ConfigError",
    "Configuration",
    "ForcingError",
    "ParseError",
    "ResourceLimitError",
    "c1_bracket",
    "disc_box",
    "disc_space",
    "disc_time",
    "disc_vertex",
    "disc_via_splits",
    "force",
    "gen_l2_random",
    "gen_space_lb",
    "gen_time_lb",
    "gen_vertex_lb",
    "inf",
    "inf_time_partial_sum",
    "l2_average",
    "run_cli",
    "simulate",
    "t_max",
]
