"""Generic open-quantum-walk channel engine over block-diagonal states.

A walk on a graph is specified by one internal-space operator B[i, j] per
directed edge i -> j; absent edges mean the zero operator.  Trace preservation
requires, for every source node i, sum_j B[i,j]^dagger B[i,j] = identity.
After a single application any graph coherences vanish, so states are stored
block-diagonally: one positive internal operator per occupied node, traces
summing to one.

Channels and states are immutable after construction and `step` is a pure
function, so independent trajectories can safely run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "STRUCTURAL_TOL",
    "STEP_TRACE_TOL",
    "ChannelStructureError",
    "ChannelCompletenessError",
    "OqwChannel",
    "BlockState",
    "ValidationReport",
    "validate_channel",
    "step",
    "position_marginal",
]

# Structural tolerances: completeness defect, PSD eigenvalue floor, state
# normalization.  Per-step trace drift is held an order tighter.
STRUCTURAL_TOL = 1e-10
STEP_TRACE_TOL = 1e-12
_HERMITIAN_TOL = 1e-12


class ChannelStructureError(ValueError):
    """Malformed channel: inconsistent shapes, bad node indices, non-square blocks."""


class ChannelCompletenessError(ValueError):
    """Channel fails the per-node completeness (trace preservation) condition."""


def _as_operator(m, dim: int | None = None) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ChannelStructureError(f"operator must be square, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise ChannelStructureError(
            f"operator has dimension {a.shape[0]}, expected {dim}"
        )
    return a


@dataclass(frozen=True)
class OqwChannel:
    """Sparse family of per-edge operators {(source, target): B} on a graph.

    Absent (source, target) pairs are zero operators.  Instances are treated
    as immutable; do not mutate `transitions` after construction.
    """

    node_count: int
    internal_dim: int
    transitions: dict[tuple[int, int], np.ndarray]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ChannelStructureError(f"node_count must be >= 1, got {self.node_count}")
        if self.internal_dim < 1:
            raise ChannelStructureError(f"internal_dim must be >= 1, got {self.internal_dim}")
        ops = {}
        for key, op in self.transitions.items():
            i, j = key
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise ChannelStructureError(f"transition {key} outside node range")
            ops[(int(i), int(j))] = _as_operator(op, self.internal_dim)
        object.__setattr__(self, "transitions", ops)

    def operator(self, source: int, target: int) -> np.ndarray:
        """B[source, target], or the zero operator if the edge is absent."""
        op = self.transitions.get((source, target))
        if op is None:
            return np.zeros((self.internal_dim, self.internal_dim), dtype=complex)
        return op


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_channel: ok iff every node's defect is within tolerance."""

    ok: bool
    defects: dict[int, float] = field(default_factory=dict)

    def offending_nodes(self) -> dict[int, float]:
        return {i: d for i, d in self.defects.items() if d > STRUCTURAL_TOL}


def validate_channel(channel: OqwChannel) -> ValidationReport:
    """Check per-node completeness sum_j B[i,j]^dagger B[i,j] = identity.

    Returns a report with the max-norm defect for every node; ok iff all
    defects are within STRUCTURAL_TOL.  Structural problems (wrong operator
    dimensions) raise ChannelStructureError instead of being reported.
    """
    dim = channel.internal_dim
    eye = np.eye(dim)
    acc = {i: np.zeros((dim, dim), dtype=complex) for i in range(channel.node_count)}
    for (i, _j), op in channel.transitions.items():
        _as_operator(op, dim)
        acc[i] += op.conj().T @ op
    defects = {i: float(np.abs(acc[i] - eye).max()) for i in range(channel.node_count)}
    return ValidationReport(ok=max(defects.values()) <= STRUCTURAL_TOL, defects=defects)


def _check_block(b: np.ndarray, dim: int) -> np.ndarray:
    b = _as_operator(b, dim)
    if np.abs(b - b.conj().T).max() > _HERMITIAN_TOL:
        raise ValueError("state block is not Hermitian")
    if np.linalg.eigvalsh(b).min() < -STRUCTURAL_TOL:
        raise ValueError("state block is not positive semidefinite")
    return b


@dataclass(frozen=True)
class BlockState:
    """Block-diagonal walk state: one PSD internal operator per occupied node."""

    node_count: int
    blocks: dict[int, np.ndarray]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise ValueError("state needs at least one block")
        dim = next(iter(self.blocks.values())).shape[0]
        checked = {}
        for node, b in self.blocks.items():
            if not 0 <= node < self.node_count:
                raise ValueError(f"block node {node} outside 0..{self.node_count - 1}")
            checked[int(node)] = _check_block(b, dim)
        total = sum(float(np.trace(b).real) for b in checked.values())
        if abs(total - 1.0) > STRUCTURAL_TOL:
            raise ValueError(f"block traces sum to {total}, not 1")
        object.__setattr__(self, "blocks", checked)

    @property
    def internal_dim(self) -> int:
        return next(iter(self.blocks.values())).shape[0]

    @classmethod
    def localized(cls, node_count: int, node: int, psi: np.ndarray | None = None) -> "BlockState":
        """Pure state |psi><psi| sitting at a single node (psi defaults to dim 1)."""
        if psi is None:
            block = np.ones((1, 1), dtype=complex)
        else:
            v = np.asarray(psi, dtype=complex).reshape(-1)
            block = np.outer(v, v.conj())
        return cls(node_count=node_count, blocks={node: block})

    def total_trace(self) -> float:
        return sum(float(np.trace(b).real) for b in self.blocks.values())


def step(channel: OqwChannel, state: BlockState) -> BlockState:
    """One application of the walk: rho'[j] = sum_i B[i,j] rho[i] B[i,j]^dagger.

    Refuses channels that fail validation (completeness defect beyond
    tolerance), since those do not preserve trace.  Returns a fresh state;
    inputs are never mutated.
    """
    report = validate_channel(channel)
    if not report.ok:
        bad = report.offending_nodes()
        raise ChannelCompletenessError(
            f"channel fails completeness at nodes {sorted(bad)}: "
            + ", ".join(f"{i}: defect {d:.3e}" for i, d in sorted(bad.items()))
        )
    if state.node_count != channel.node_count:
        raise ValueError(
            f"state on {state.node_count} nodes fed to channel with {channel.node_count}"
        )
    if state.internal_dim != channel.internal_dim:
        raise ValueError(
            f"state internal dim {state.internal_dim} != channel dim {channel.internal_dim}"
        )

    new_blocks: dict[int, np.ndarray] = {}
    for (i, j), op in channel.transitions.items():
        rho = state.blocks.get(i)
        if rho is None:
            continue
        contrib = op @ rho @ op.conj().T
        if j in new_blocks:
            new_blocks[j] += contrib
        else:
            new_blocks[j] = contrib
    # Kill roundoff asymmetry so the PSD/Hermitian invariants stay exact.
    for j, b in new_blocks.items():
        new_blocks[j] = 0.5 * (b + b.conj().T)
    return BlockState(node_count=state.node_count, blocks=new_blocks)


def position_marginal(state: BlockState) -> np.ndarray:
    """Node-occupation probabilities p_i = trace(rho[i]); sums to 1."""
    p = np.zeros(state.node_count)
    for node, b in state.blocks.items():
        p[node] = float(np.trace(b).real)
    return p
