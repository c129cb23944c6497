"""Per-round protocol engines.

Three engines share one network state:

* ``sep_round``    — clustered routing to a static sink. Nodes self-elect as
  cluster heads with a rotating threshold weighted by energy heterogeneity,
  members transmit to the nearest head, heads aggregate and forward.
* ``cl_sep_round`` — clusterless baseline: every alive node transmits one
  packet straight to the static sink each round.
* ``srp_round``    — mobile sink: only nodes within the trajectory's sensing
  range of the current sojourn point transmit; everyone else sleeps for free.

Death rule (uniform across engines): a node performs an energy-costing action
only when its residual energy covers the full cost; otherwise it spends
nothing, delivers nothing and is marked dead on the spot. Energy therefore
never goes negative, and a node whose residual exactly hits zero is marked
dead the next time it attempts to act.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy import RadioParams, aggregation_energy, rx_energy, tx_energy, tx_energy_many
from .errors import ConfigurationError
from .geometry import Point, Trajectory, sink_position

NORMAL = "normal"
ADVANCED = "advanced"

SEP = "sep"
CL_SEP = "cl-sep"
SRP = "srp"
PROTOCOLS = (SEP, CL_SEP, SRP)


@dataclass(frozen=True)
class NetworkParams:
    """Node population and heterogeneity parameters."""

    n: int = 100
    m: float = 0.1        # advanced-node fraction
    alpha: float = 1.0    # extra initial energy factor for advanced nodes
    e0: float = 0.5       # initial energy of a normal node, J
    p_opt: float = 0.1    # target cluster-head probability per round

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.m <= 1.0:
            raise ConfigurationError(f"m must be in [0, 1], got {self.m}")
        if self.alpha < 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if not self.e0 > 0:
            raise ConfigurationError(f"e0 must be > 0, got {self.e0}")
        if not 0.0 < self.p_opt <= 1.0:
            raise ConfigurationError(f"p_opt must be in (0, 1], got {self.p_opt}")
        if self.advanced_count > 0 and ch_probability(self, ADVANCED) >= 1.0:
            raise ConfigurationError("advanced election probability reaches 1; lower p_opt or alpha")

    @property
    def advanced_count(self) -> int:
        """Number of advanced nodes: m*n rounded to nearest."""
        return int(math.floor(self.m * self.n + 0.5))

    @property
    def advanced_energy(self) -> float:
        return self.e0 * (1.0 + self.alpha)

    @property
    def total_initial_energy(self) -> float:
        adv = self.advanced_count
        return (self.n - adv) * self.e0 + adv * self.advanced_energy


@dataclass
class Node:
    """One sensor node."""

    id: int
    pos: Point
    kind: str = NORMAL
    energy: float = 0.5
    alive: bool = True
    in_set_g: bool = True     # eligible for cluster-head duty this epoch
    packets_sent: int = 0


class NodeState:
    """Mutable per-node state held as parallel arrays for fast round updates."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray, is_advanced: np.ndarray,
                 energy: np.ndarray, alive: np.ndarray, in_set_g: np.ndarray,
                 packets_sent: np.ndarray):
        self.xs = xs
        self.ys = ys
        self.is_advanced = is_advanced
        self.energy = energy
        self.alive = alive
        self.in_set_g = in_set_g
        self.packets_sent = packets_sent

    @classmethod
    def from_nodes(cls, nodes: list[Node]) -> "NodeState":
        return cls(
            xs=np.array([n.pos.x for n in nodes], dtype=np.float64),
            ys=np.array([n.pos.y for n in nodes], dtype=np.float64),
            is_advanced=np.array([n.kind == ADVANCED for n in nodes], dtype=bool),
            energy=np.array([n.energy for n in nodes], dtype=np.float64),
            alive=np.array([n.alive for n in nodes], dtype=bool),
            in_set_g=np.array([n.in_set_g for n in nodes], dtype=bool),
            packets_sent=np.array([n.packets_sent for n in nodes], dtype=np.int64),
        )

    def to_nodes(self) -> list[Node]:
        return [
            Node(
                id=i,
                pos=Point(float(self.xs[i]), float(self.ys[i])),
                kind=ADVANCED if self.is_advanced[i] else NORMAL,
                energy=float(self.energy[i]),
                alive=bool(self.alive[i]),
                in_set_g=bool(self.in_set_g[i]),
                packets_sent=int(self.packets_sent[i]),
            )
            for i in range(self.n)
        ]

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    def alive_count(self) -> int:
        return int(self.alive.sum())

    def total_energy(self) -> float:
        return float(sum(self.energy.tolist()))


@dataclass
class RoundOutcome:
    """What one engine round did to the network."""

    packets: int = 0           # packets that reached the sink
    cost: float = 0.0          # total energy spent by all nodes, J
    cluster_heads: int = 0     # heads elected (clustered protocol only)
    deaths: int = 0


def ch_probability(net: NetworkParams, kind: str) -> float:
    """Per-round cluster-head election probability for a node kind.

    Normal nodes get p_opt/(1 + alpha*m) and advanced nodes carry the extra
    (1 + alpha) weight, so the population-weighted mean stays at p_opt.
    """
    if kind == NORMAL:
        return net.p_opt / (1.0 + net.alpha * net.m)
    if kind == ADVANCED:
        return net.p_opt * (1.0 + net.alpha) / (1.0 + net.alpha * net.m)
    raise ValueError(f"unknown node kind: {kind!r}")


def election_threshold(p: float, round_idx: int, in_set_g: bool) -> float:
    """Rotating self-election threshold.

    Nodes outside the eligible set G get 0. Within an epoch of ceil(1/p)
    rounds the threshold climbs as p / (1 - p*(r mod epoch)) so each eligible
    node is elected once per epoch in expectation; the final slot clamps to 1.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if not in_set_g:
        return 0.0
    epoch = math.ceil(1.0 / p)
    slot = round_idx % epoch
    denom = 1.0 - p * slot
    if denom <= 0.0:
        return 1.0
    return min(1.0, p / denom)


def _epoch(p: float) -> int:
    return math.ceil(1.0 / p)


def sep_round(state: NodeState, round_idx: int, net: NetworkParams,
              radio: RadioParams, sink: Point, rng: np.random.Generator) -> RoundOutcome:
    """One clustered round against a static sink.

    Phases: epoch bookkeeping and head self-election; members join the nearest
    alive head; member-to-head transmissions (head pays reception per packet);
    heads aggregate (received messages plus their own) and forward one packet
    to the sink. If no head is elected every alive node falls back to
    transmitting directly to the sink. Members do not re-route when their head
    dies mid-round; those packets are lost.
    """
    out = RoundOutcome()
    # One draw per node id, consumed every round, so the stream does not
    # depend on which nodes are alive.
    draws = rng.random(state.n)
    if not state.alive.any():
        return out

    k = radio.packet_bits
    p_nrm = ch_probability(net, NORMAL)
    p_adv = ch_probability(net, ADVANCED)

    # Epoch boundaries re-admit every alive node of that kind to set G.
    if round_idx % _epoch(p_nrm) == 0:
        state.in_set_g[state.alive & ~state.is_advanced] = True
    if round_idx % _epoch(p_adv) == 0:
        state.in_set_g[state.alive & state.is_advanced] = True

    t_nrm = election_threshold(p_nrm, round_idx, True)
    t_adv = election_threshold(p_adv, round_idx, True)
    thresholds = np.where(state.is_advanced, t_adv, t_nrm)
    thresholds = np.where(state.in_set_g, thresholds, 0.0)
    is_ch = state.alive & (draws < thresholds)
    ch_ids = np.flatnonzero(is_ch)
    state.in_set_g[ch_ids] = False
    out.cluster_heads = len(ch_ids)

    alive_before = state.alive_count()
    energy = state.energy
    xs = state.xs
    ys = state.ys

    if len(ch_ids) == 0:
        # Fallback: nobody advertised, everyone reports directly.
        for i in np.flatnonzero(state.alive).tolist():
            dx = float(xs[i]) - sink.x
            dy = float(ys[i]) - sink.y
            c = tx_energy(radio, k, math.sqrt(dx * dx + dy * dy))
            if float(energy[i]) >= c:
                energy[i] -= c
                state.packets_sent[i] += 1
                out.packets += 1
                out.cost += c
            else:
                state.alive[i] = False
        out.deaths = alive_before - state.alive_count()
        return out

    member_ids = np.flatnonzero(state.alive & ~is_ch)
    received = {int(ch): 0 for ch in ch_ids.tolist()}

    if len(member_ids) > 0:
        # Nearest alive head by Euclidean distance, lowest id on ties.
        dx = xs[member_ids, None] - xs[None, ch_ids]
        dy = ys[member_ids, None] - ys[None, ch_ids]
        dists = np.sqrt(dx * dx + dy * dy)
        nearest = np.argmin(dists, axis=1)
        rx_cost = rx_energy(radio, k)
        for row, i in enumerate(member_ids.tolist()):
            ch = int(ch_ids[nearest[row]])
            c = tx_energy(radio, k, float(dists[row, nearest[row]]))
            if float(energy[i]) >= c:
                energy[i] -= c
                state.packets_sent[i] += 1
                out.cost += c
                if state.alive[ch]:
                    if float(energy[ch]) >= rx_cost:
                        energy[ch] -= rx_cost
                        out.cost += rx_cost
                        received[ch] += 1
                    else:
                        state.alive[ch] = False
            else:
                state.alive[i] = False

    for ch in ch_ids.tolist():
        if not state.alive[ch]:
            continue
        dx = float(xs[ch]) - sink.x
        dy = float(ys[ch]) - sink.y
        n_msgs = received[ch] + 1  # members' packets plus the head's own
        c = aggregation_energy(radio, k, n_msgs) + tx_energy(radio, k, math.sqrt(dx * dx + dy * dy))
        if float(energy[ch]) >= c:
            energy[ch] -= c
            state.packets_sent[ch] += 1
            out.packets += 1
            out.cost += c
        else:
            state.alive[ch] = False

    out.deaths = alive_before - state.alive_count()
    return out


def cl_sep_round(state: NodeState, radio: RadioParams, sink: Point) -> RoundOutcome:
    """One clusterless round: every alive node transmits directly to the sink."""
    out = RoundOutcome()
    k = radio.packet_bits
    energy = state.energy
    alive_before = state.alive_count()
    for i in np.flatnonzero(state.alive).tolist():
        dx = float(state.xs[i]) - sink.x
        dy = float(state.ys[i]) - sink.y
        c = tx_energy(radio, k, math.sqrt(dx * dx + dy * dy))
        if float(energy[i]) >= c:
            energy[i] -= c
            state.packets_sent[i] += 1
            out.packets += 1
            out.cost += c
        else:
            state.alive[i] = False
    out.deaths = alive_before - state.alive_count()
    return out


def srp_round(state: NodeState, trajectory: Trajectory, round_idx: int,
              radio: RadioParams) -> RoundOutcome:
    """One mobile-sink round.

    The sink sits at its sojourn point for the round; alive nodes within
    sensing range (boundary inclusive) transmit one packet at their actual
    distance, everyone else sleeps at zero cost.
    """
    if trajectory.sensing_range is None:
        raise ConfigurationError("mobile-sink protocol requires a sensing_range")
    out = RoundOutcome()
    if not state.alive.any():
        return out

    sink = sink_position(trajectory, round_idx)
    dx = state.xs - sink.x
    dy = state.ys - sink.y
    d = np.sqrt(dx * dx + dy * dy)
    in_range = state.alive & (d <= trajectory.sensing_range)
    if not in_range.any():
        return out

    cost = tx_energy_many(radio, radio.packet_bits, d)
    can_pay = in_range & (state.energy >= cost)
    exhausted = in_range & ~can_pay

    state.energy[can_pay] -= cost[can_pay]
    state.packets_sent[can_pay] += 1
    state.alive[exhausted] = False

    out.packets = int(can_pay.sum())
    # Deterministic order: costs summed in node-id order.
    out.cost = float(sum(cost[can_pay].tolist()))
    out.deaths = int(exhausted.sum())
    return out
