"""Experiment grids: materialize configs, run them (optionally in parallel),
and assemble a deterministic results table.

A sweep is the Cartesian product N x density x k x strategy, replicated
over seeds_per_cell seeds. Each run's seed is base_seed XOR
splitmix64(cell_index * 2^32 + replicate), so any implementation of the
format can reproduce the exact grid. Rows are assembled in materialization
order, never completion order, so parallelism cannot change the output.
"""

from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from math import sqrt
from typing import Mapping, Optional

from .behavior import BehaviorParams, Strategy
from .core import ConfigurationError, splitmix64
from .engine import RunRecord, SimConfig, run
from .files import (
    BEHAVIOR_KEYS,
    SIM_KEYS,
    SWEEP_ONLY_KEYS,
    _check_known_keys,
    _convert,
    _strategy_from_name,
    behavior_from_mapping,
    split_list,
)


def side_for_density(N: int, rho: float) -> float:
    """Invert rho = N / L^2; exact to float round-trip."""
    if rho <= 0:
        raise ConfigurationError(f"density must be positive, got {rho}")
    return sqrt(N / rho)


def derive_seed(base_seed: int, cell_index: int, replicate: int) -> int:
    """Documented per-run seed: base ^ splitmix64(cell * 2^32 + replicate)."""
    return (base_seed ^ splitmix64(((cell_index & 0xFFFFFFFF) << 32) | (replicate & 0xFFFFFFFF))) & 0xFFFFFFFFFFFFFFFF


@dataclass
class SweepSpec:
    N_values: list[int]
    k_values: list[int]
    rho_values: Optional[list[float]] = None
    L_values: Optional[list[float]] = None
    strategies: list[Strategy] = field(default_factory=lambda: [Strategy.ADAPTIVE])
    seeds_per_cell: int = 5
    base_seed: int = 0
    base: SimConfig = field(
        default_factory=lambda: SimConfig(N=0, L=1.0, k=0, T=20_000)
    )  # N/L/k placeholders are replaced per cell

    def validate(self) -> None:
        if not self.N_values:
            raise ConfigurationError("sweep needs at least one N value")
        if not self.k_values:
            raise ConfigurationError("sweep needs at least one k value")
        if not self.strategies:
            raise ConfigurationError("sweep needs at least one strategy")
        if (self.rho_values is None) == (self.L_values is None):
            raise ConfigurationError("sweep needs exactly one of rho values or L values")
        if not (self.rho_values or self.L_values):
            raise ConfigurationError("density/side list must be non-empty")
        if self.seeds_per_cell < 1:
            raise ConfigurationError(f"seeds_per_cell must be >= 1, got {self.seeds_per_cell}")

    def cells(self) -> list[tuple[int, float, int, Strategy]]:
        """(N, L, k, strategy) per cell, in deterministic grid order."""
        self.validate()
        out = []
        densities = self.rho_values if self.rho_values is not None else self.L_values
        for n, dens, k, strat in product(self.N_values, densities, self.k_values, self.strategies):
            side = side_for_density(n, dens) if self.rho_values is not None else float(dens)
            out.append((n, side, k, strat))
        return out


def materialize(spec: SweepSpec) -> list[SimConfig]:
    """Expand the grid into per-run configs with derived seeds.

    Order: cells in grid order, replicates innermost. Every produced config
    is validated; a bad cell raises an error that names it.
    """
    configs = []
    for cell_index, (n, side, k, strat) in enumerate(spec.cells()):
        behavior = replace(spec.base.behavior, strategy=strat)
        for rep in range(spec.seeds_per_cell):
            config = replace(
                spec.base,
                N=n,
                L=side,
                k=k,
                seed=derive_seed(spec.base_seed, cell_index, rep),
                behavior=behavior,
            )
            try:
                config.validate()
            except ConfigurationError as exc:
                raise ConfigurationError(
                    f"cell {cell_index} (N={n}, L={side}, k={k}, "
                    f"strategy={strat.value}): {exc}"
                ) from exc
            configs.append(config)
    return configs


@dataclass(frozen=True)
class ResultRow:
    N: int
    L: float
    rho: float
    k: int
    strategy: str
    seed: int
    Xi: float
    Theta: float
    rho_L: float
    delta_rho: float
    wall_time_s: float


@dataclass(frozen=True)
class SweepError:
    cell_index: int
    replicate: int
    seed: int
    message: str


@dataclass
class ResultsTable:
    rows: list[ResultRow]
    errors: list[SweepError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def _row_from_record(record: RunRecord) -> ResultRow:
    cfg = record.config
    m = record.metrics
    return ResultRow(
        N=cfg.N,
        L=cfg.L,
        rho=cfg.rho,
        k=cfg.k,
        strategy=cfg.behavior.strategy.value,
        seed=record.seed,
        Xi=m.Xi,
        Theta=m.Theta,
        rho_L=m.rho_L,
        delta_rho=m.delta_rho,
        wall_time_s=record.wall_time_s,
    )


def _execute(config: SimConfig) -> ResultRow:
    # worker: drop the trajectory, ship only the aggregated row back
    return _row_from_record(run(config))


def resolve_parallelism(requested: Optional[int] = None) -> int:
    """SWARM_LAB_THREADS wins over the explicit request, which wins over cpu count."""
    env = os.environ.get("SWARM_LAB_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise ConfigurationError(f"SWARM_LAB_THREADS={env!r} is not an integer") from exc
        if value < 1:
            raise ConfigurationError(f"SWARM_LAB_THREADS must be >= 1, got {value}")
        return value
    if requested is not None:
        if requested < 1:
            raise ConfigurationError(f"parallelism must be >= 1, got {requested}")
        return requested
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, parallelism: Optional[int] = None) -> ResultsTable:
    """Run every (cell, replicate); failures become error entries, not aborts."""
    configs = materialize(spec)
    workers = min(resolve_parallelism(parallelism), len(configs))
    results: list[Optional[ResultRow]] = [None] * len(configs)
    failures: list[tuple[int, str]] = []

    if workers <= 1:
        for i, config in enumerate(configs):
            try:
                results[i] = _execute(config)
            except Exception as exc:  # error row, keep sweeping
                failures.append((i, f"{type(exc).__name__}: {exc}"))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {i: pool.submit(_execute, cfg) for i, cfg in enumerate(configs)}
            for i, fut in futures.items():
                try:
                    results[i] = fut.result()
                except Exception as exc:
                    failures.append((i, f"{type(exc).__name__}: {exc}"))

    rows = [r for r in results if r is not None]
    errors = [
        SweepError(
            cell_index=i // spec.seeds_per_cell,
            replicate=i % spec.seeds_per_cell,
            seed=configs[i].seed,
            message=msg,
        )
        for i, msg in sorted(failures)
    ]
    return ResultsTable(rows=rows, errors=errors)


def sweep_spec_from_mapping(mapping: Mapping[str, str]) -> SweepSpec:
    """Build a SweepSpec from a parsed key/value file."""
    allowed = set(SIM_KEYS) | set(BEHAVIOR_KEYS) | set(SWEEP_ONLY_KEYS)
    allowed -= {"seed"}  # per-run seeds are derived, never set directly
    _check_known_keys(mapping, allowed, "sweep spec")
    for required in ("N", "k"):
        if required not in mapping:
            raise ConfigurationError(f"sweep spec is missing required key {required!r}")
    if ("L" in mapping) == ("rho" in mapping):
        raise ConfigurationError("sweep spec needs exactly one of 'L' or 'rho'")

    n_values = [_convert("N", v, int) for v in split_list(mapping["N"])]
    k_values = [_convert("k", v, int) for v in split_list(mapping["k"])]
    rho_values = None
    l_values = None
    if "rho" in mapping:
        rho_values = [_convert("rho", v, float) for v in split_list(mapping["rho"])]
    else:
        l_values = [_convert("L", v, float) for v in split_list(mapping["L"])]
    strategies = [Strategy.ADAPTIVE]
    if "strategy" in mapping:
        strategies = [_strategy_from_name(v) for v in split_list(mapping["strategy"])]

    base_kwargs = {}
    for key in ("v_a_max", "v_o_max", "r", "T", "record_stride", "boundary", "limit_mode"):
        if key in mapping:
            base_kwargs[key] = _convert(key, mapping[key], SIM_KEYS[key])
    # strategy is a per-cell list here, not a single behavior field
    behavior_mapping = {k: v for k, v in mapping.items() if k != "strategy"}
    base = SimConfig(
        N=0, L=1.0, k=0, T=base_kwargs.pop("T", 20_000),
        behavior=behavior_from_mapping(behavior_mapping), **base_kwargs,
    )
    return SweepSpec(
        N_values=n_values,
        k_values=k_values,
        rho_values=rho_values,
        L_values=l_values,
        strategies=strategies,
        seeds_per_cell=_convert("seeds_per_cell", mapping.get("seeds_per_cell", "5"), int),
        base_seed=_convert("base_seed", mapping.get("base_seed", "0"), int),
        base=base,
    )
