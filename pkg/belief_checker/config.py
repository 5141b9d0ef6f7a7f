import os
from contextlib import contextmanager
from dataclasses import dataclass, fields
from pathlib import Path

from typing import Any, Dict, Iterator, Union

import tomlkit
from tomlkit.exceptions import ParseError
from tomlkit.toml_document import TOMLDocument

from belief_checker.errors import ConfigError

ENV_PREFIX = "BELIEF_CHECKER_"
CONFIG_TABLE = "checker"
MAX_POINTS_LIMIT = 60


def _env(name: str, default: str) -> str:
    return os.environ.get(ENV_PREFIX + name, default)


@dataclass
class CheckerOpts:
    """
    Options for random model / formula generation and for the command line tool

    Every field can be set from the environment (e.g. BELIEF_CHECKER_SEED=7) or from the
    [checker] table of a TOML file (see load_opts).

    Attributes:
        runs_min (int): minimum number of runs in a random model
        runs_max (int): maximum number of runs in a random model
        horizon_min (int): minimum run horizon
        horizon_max (int): maximum run horizon
        agents_min (int): minimum number of agents
        agents_max (int): maximum number of agents
        variables (int): number of ordinary Boolean variables
        flag_density (float): probability of an ACTING / SHOULD_ACT flag at a point
        edge_density (float): probability of a raw belief edge before KD45 repair
        max_points (int): upper bound on points per model (desk scale, at most 60)
        formula_depth (int): depth of random formulas
        corpus_size (int): default number of random models for corpus runs
        seed (int): base seed
        log_level (str): logging level name used by the command line tool
    """

    runs_min: int = int(_env("RUNS_MIN", "2"))
    runs_max: int = int(_env("RUNS_MAX", "4"))
    horizon_min: int = int(_env("HORIZON_MIN", "2"))
    horizon_max: int = int(_env("HORIZON_MAX", "5"))
    agents_min: int = int(_env("AGENTS_MIN", "2"))
    agents_max: int = int(_env("AGENTS_MAX", "3"))
    variables: int = int(_env("VARIABLES", "2"))
    flag_density: float = float(_env("FLAG_DENSITY", "0.2"))
    edge_density: float = float(_env("EDGE_DENSITY", "0.3"))
    max_points: int = int(_env("MAX_POINTS", "60"))
    formula_depth: int = int(_env("FORMULA_DEPTH", "3"))
    corpus_size: int = int(_env("CORPUS_SIZE", "200"))
    seed: int = int(_env("SEED", "0"))
    log_level: str = _env("LOG_LEVEL", "WARNING")

    def __post_init__(self):
        for lo, hi in (("runs_min", "runs_max"), ("horizon_min", "horizon_max"), ("agents_min", "agents_max")):
            if getattr(self, lo) < 1:
                raise ConfigError(f"{lo} must be positive")
            if getattr(self, lo) > getattr(self, hi):
                raise ConfigError(f"{lo} ({getattr(self, lo)}) > {hi} ({getattr(self, hi)})")
        for name in ("flag_density", "edge_density"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")
        if self.variables < 0 or self.formula_depth < 0 or self.corpus_size < 0:
            raise ConfigError("variables, formula_depth and corpus_size must be >= 0")
        if not 1 <= self.max_points <= MAX_POINTS_LIMIT:
            raise ConfigError(f"max_points must be in [1, {MAX_POINTS_LIMIT}]")
        if self.runs_max * self.horizon_max > self.max_points:
            raise ConfigError(
                f"runs_max * horizon_max = {self.runs_max * self.horizon_max} exceeds max_points"
            )
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigError(f"unknown log level {self.log_level}")


def opts_from_mapping(values: Dict[str, Any], base: CheckerOpts | None = None) -> CheckerOpts:
    """Overlay values on base (or on the environment defaults)"""
    known = {f.name: f.type for f in fields(CheckerOpts)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"unknown option(s): {unknown}")
    current = {f.name: getattr(base, f.name) for f in fields(CheckerOpts)} if base else {}
    current.update({k: _unwrap(v) for k, v in values.items()})
    try:
        return CheckerOpts(**current)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def _unwrap(value: Any) -> Any:
    # tomlkit items wrap python values
    return value.unwrap() if hasattr(value, "unwrap") else value


def load_opts(path: Union[str, Path]) -> CheckerOpts:
    """Read CheckerOpts from the [checker] table of a TOML file

    Raises:
        ConfigError: unreadable file, missing table or unknown / invalid key
    """
    try:
        with open(path, "r", encoding="utf-8") as fp:
            doc = tomlkit.load(fp)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except ParseError as e:
        raise ConfigError(f"invalid TOML in {path}: {e}") from e

    table = doc.get(CONFIG_TABLE)
    if table is None:
        raise ConfigError(f"{path}: no [{CONFIG_TABLE}] table")
    return opts_from_mapping(dict(table))


@contextmanager
def edit_opts(path: Union[str, Path]) -> Iterator[TOMLDocument]:
    """Edit a config file (as a context manager), creating it if needed

    Example:
        >>> with edit_opts("checker.toml") as cfg:
        ...     cfg["checker"]["seed"] = 7
    """
    path = Path(path)
    if path.exists():
        with open(path, "r", encoding="utf-8") as fp:
            cfg = tomlkit.load(fp)
    else:
        cfg = tomlkit.document()
    if CONFIG_TABLE not in cfg:
        cfg[CONFIG_TABLE] = tomlkit.table()
    try:
        yield cfg
    finally:
        with open(path, "w", encoding="utf-8") as fp:
            tomlkit.dump(cfg, fp)
