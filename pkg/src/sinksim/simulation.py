"""Deployment, seeded randomness, the round loop, and metrics capture.

A run is a pure function of its :class:`ScenarioConfig`: node placement and
election draws come from named substreams of the seed, so the same config
always produces byte-identical metrics.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .energy import RadioParams, tx_energy
from .errors import ConfigurationError
from .geometry import (Field, Point, SquareField, Trajectory, sink_position,
                       sojourn_points, trajectory_in_field)
from .protocols import (CL_SEP, PROTOCOLS, SRP, NetworkParams, Node,
                        NodeState, RoundOutcome, cl_sep_round, sep_round,
                        srp_round)

RNG_GENERATOR = "numpy.PCG64"
RNG_DERIVATION = "SeedSequence([seed & 2**64-1, sha256(label)[:8] as uint64])"

STOP_ALL_DEAD = "all_dead"
STOP_MAX_ROUNDS = "max_rounds"
STOP_RULES = (STOP_ALL_DEAD, STOP_MAX_ROUNDS)


def rng_stream(seed: int, label: str) -> np.random.Generator:
    """Independent, reproducible random substream for (seed, label).

    Streams with different labels are statistically independent, so adding a
    new consumer never perturbs existing ones.
    """
    label_key = int.from_bytes(hashlib.sha256(label.encode("utf-8")).digest()[:8], "big")
    ss = np.random.SeedSequence([seed & (2**64 - 1), label_key])
    return np.random.Generator(np.random.PCG64(ss))


def rng_identity() -> dict:
    """Pinned generator identity for output metadata."""
    return {
        "generator": RNG_GENERATOR,
        "derivation": RNG_DERIVATION,
        "numpy": np.__version__,
    }


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a run needs: geometry, protocol, parameters, seed, horizon."""

    field: Field
    trajectory: Trajectory
    protocol: str
    net: NetworkParams = NetworkParams()
    radio: RadioParams = RadioParams()
    seed: int = 0
    max_rounds: int = 50_000
    stop_rule: str = STOP_MAX_ROUNDS

    def __post_init__(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigurationError(f"unknown protocol {self.protocol!r}; expected one of {PROTOCOLS}")
        if self.stop_rule not in STOP_RULES:
            raise ConfigurationError(f"unknown stop_rule {self.stop_rule!r}; expected one of {STOP_RULES}")
        if self.max_rounds < 1:
            raise ConfigurationError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.protocol == SRP:
            if self.trajectory.is_static:
                raise ConfigurationError("srp requires a moving trajectory, not a static point")
            if self.trajectory.sensing_range is None:
                raise ConfigurationError("srp requires trajectory.sensing_range")
        else:
            if not self.trajectory.is_static:
                raise ConfigurationError(f"{self.protocol} requires a static-point trajectory")
        if not trajectory_in_field(self.trajectory, self.field):
            raise ConfigurationError("trajectory does not lie inside the field")
        for p in sojourn_points(self.trajectory):
            if not self.field.contains(p):
                raise ConfigurationError(f"sojourn point ({p.x}, {p.y}) lies outside the field")


@dataclass
class RunMetrics:
    """Per-round series plus lifetime summary for one run.

    Rows describe the state after each executed round. ``residual_j`` is the
    fold of ``round_cost_j`` from the initial energy, so consecutive residuals
    differ by exactly the reported round cost. Death rounds are None when the
    horizon ended first.
    """

    n: int
    initial_energy_j: float
    rounds: list[int] = field(default_factory=list)
    alive: list[int] = field(default_factory=list)
    residual_j: list[float] = field(default_factory=list)
    cumulative_packets: list[int] = field(default_factory=list)
    round_cost_j: list[float] = field(default_factory=list)
    first_death_round: int | None = None
    half_death_round: int | None = None
    last_death_round: int | None = None
    total_packets: int = 0

    @property
    def rounds_executed(self) -> int:
        return len(self.rounds)

    @property
    def final_residual_j(self) -> float:
        return self.residual_j[-1] if self.residual_j else self.initial_energy_j


def deploy(cfg: ScenarioConfig) -> list[Node]:
    """Place nodes uniformly in the field; a pure function of the seed.

    Positions are drawn in id order (circular fields use rejection sampling
    from the bounding box), then round(m*n) advanced ids are picked by a
    single shuffle.
    """
    rng = rng_stream(cfg.seed, "deploy")
    f = cfg.field
    positions: list[Point] = []
    if isinstance(f, SquareField):
        for _ in range(cfg.net.n):
            positions.append(Point(rng.uniform(0.0, f.side), rng.uniform(0.0, f.side)))
    else:
        cx, cy, r = f.center.x, f.center.y, f.radius
        for _ in range(cfg.net.n):
            while True:
                x = rng.uniform(cx - r, cx + r)
                y = rng.uniform(cy - r, cy + r)
                p = Point(x, y)
                if f.contains(p):
                    positions.append(p)
                    break
    advanced_ids = set(rng.permutation(cfg.net.n)[: cfg.net.advanced_count].tolist())
    nodes = []
    for i, pos in enumerate(positions):
        adv = i in advanced_ids
        nodes.append(Node(
            id=i,
            pos=pos,
            kind="advanced" if adv else "normal",
            energy=cfg.net.advanced_energy if adv else cfg.net.e0,
        ))
    return nodes


class _SojournSchedule:
    """Precomputed per-sojourn-slot reach for a mobile-sink run.

    Node positions and the tour never change, so the set of nodes within
    sensing range of each sojourn point, and their transmission costs, are
    fixed for the whole run. Entries use the exact same distance and energy
    expressions as ``srp_round``, only cached.
    """

    def __init__(self, cfg: ScenarioConfig, state: NodeState):
        pts = sojourn_points(cfg.trajectory)
        rng_m = cfg.trajectory.sensing_range
        k = cfg.radio.packet_bits
        xs = state.xs.tolist()
        ys = state.ys.tolist()
        self.slots: list[list[tuple[int, float]]] = []
        for p in pts:
            entries = []
            for i in range(len(xs)):
                dx = xs[i] - p.x
                dy = ys[i] - p.y
                d = math.sqrt(dx * dx + dy * dy)
                if d <= rng_m:
                    entries.append((i, tx_energy(cfg.radio, k, d)))
            self.slots.append(entries)


class Simulation:
    """One isolated protocol run; owns its state exclusively."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.state = NodeState.from_nodes(deploy(cfg))
        self._election_rng = rng_stream(cfg.seed, "election")
        self._static_sink = (sink_position(cfg.trajectory, 0)
                             if cfg.trajectory.is_static else None)
        self._schedule = _SojournSchedule(cfg, self.state) if cfg.protocol == SRP else None

    @property
    def nodes(self) -> list[Node]:
        """Snapshot of current node states."""
        return self.state.to_nodes()

    def step(self, round_idx: int) -> RoundOutcome:
        """Execute one protocol round."""
        cfg = self.cfg
        if cfg.protocol == SRP:
            return self._srp_step(round_idx)
        if cfg.protocol == CL_SEP:
            return cl_sep_round(self.state, cfg.radio, self._static_sink)
        return sep_round(self.state, round_idx, cfg.net, cfg.radio,
                         self._static_sink, self._election_rng)

    def _srp_step(self, round_idx: int) -> RoundOutcome:
        """srp_round semantics driven from the precomputed sojourn schedule.

        Visits candidates in node-id order exactly like the reference engine,
        so outcomes and energy arithmetic are bitwise identical (covered by a
        run-equivalence test).
        """
        out = RoundOutcome()
        entries = self._schedule.slots[round_idx % len(self._schedule.slots)]
        if not entries:
            return out
        state = self.state
        alive = state.alive
        energy = state.energy
        for i, cost in entries:
            if not alive[i]:
                continue
            if energy[i] >= cost:
                energy[i] -= cost
                state.packets_sent[i] += 1
                out.packets += 1
                out.cost += cost
            else:
                alive[i] = False
                out.deaths += 1
        return out

    def run(self) -> RunMetrics:
        """Execute rounds until the stop rule fires; record per-round metrics."""
        cfg = self.cfg
        n = cfg.net.n
        metrics = RunMetrics(n=n, initial_energy_j=self.state.total_energy())
        residual = metrics.initial_energy_j
        cum_packets = 0
        alive = self.state.alive_count()
        half_alive = n // 2

        for r in range(cfg.max_rounds):
            outcome = self.step(r)
            residual -= outcome.cost
            cum_packets += outcome.packets
            alive -= outcome.deaths

            metrics.rounds.append(r)
            metrics.alive.append(alive)
            metrics.residual_j.append(residual)
            metrics.cumulative_packets.append(cum_packets)
            metrics.round_cost_j.append(outcome.cost)

            if metrics.first_death_round is None and alive < n:
                metrics.first_death_round = r
            if metrics.half_death_round is None and alive <= half_alive:
                metrics.half_death_round = r
            if metrics.last_death_round is None and alive == 0:
                metrics.last_death_round = r
                if cfg.stop_rule == STOP_ALL_DEAD:
                    break

        metrics.total_packets = cum_packets
        return metrics


def run(cfg: ScenarioConfig) -> RunMetrics:
    """Deploy, run and summarize one scenario."""
    return Simulation(cfg).run()
