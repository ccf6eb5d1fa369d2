"""Synthetic labeled sequence datasets with controllable class separability.

Every taxonomy node owns an order-1 nucleotide Markov chain. Each chain is an
interpolation between one shared base transition matrix and a node-specific
random matrix, weighted by the separability knob; a child's random matrix is
a drifted copy of its parent's, so nearby classes stay nearby in k-mer space.
Separability 0 collapses all chains onto the shared base; separability 1
makes them fully node-specific.

The sample budget is ``sequences_per_node * node_count``, split so that the
configured fraction of samples carries internal-node labels (exercising
non-mandatory leaf prediction and the replicated-self classes); the rest is
divided evenly among the leaves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labels import HierLabel
from .sequence_io import Sequence
from .taxonomy import Taxonomy

_BASES = "ACGT"
_CHILD_DRIFT = 0.6  # how far a child's random matrix moves from its parent's
_DIRICHLET_ALPHA = 1.5


@dataclass(frozen=True)
class SynthSpec:
    taxonomy: Taxonomy
    sequences_per_node: int = 100
    length_range: tuple[int, int] = (500, 500)
    separability: float = 0.9
    internal_label_fraction: float = 0.15
    seed: int = 0

    def __post_init__(self):
        if self.sequences_per_node < 0:
            raise ValueError("sequences_per_node must be >= 0")
        lo, hi = self.length_range
        if lo < 1 or hi < lo:
            raise ValueError(f"bad length range {self.length_range}")
        if not 0.0 <= self.separability <= 1.0:
            raise ValueError("separability must be in [0, 1]")
        if not 0.0 <= self.internal_label_fraction <= 1.0:
            raise ValueError("internal_label_fraction must be in [0, 1]")


def taxonomy_from_shape(level_counts: list[int], seed: int = 0) -> Taxonomy:
    """A taxonomy with the given node count per level (e.g. [2, 4, 3, 5]).

    Children are dealt round-robin over a seed-shuffled parent order, so the
    per-level counts are exact and the tree varies with the seed.
    """
    if not level_counts or any(c < 1 for c in level_counts):
        raise ValueError("level_counts must be positive")
    rng = np.random.default_rng(seed)
    labels: list[HierLabel] = []
    previous = [HierLabel((i + 1,)) for i in range(level_counts[0])]
    labels.extend(previous)
    for count in level_counts[1:]:
        order = list(rng.permutation(len(previous)))
        next_component = {p: 0 for p in previous}
        current: list[HierLabel] = []
        for i in range(count):
            parent = previous[order[i % len(previous)]]
            next_component[parent] += 1
            current.append(parent.child(next_component[parent]))
        labels.extend(current)
        previous = current
    return Taxonomy(labels)


def _even_split(total: int, bins: int) -> list[int]:
    """Largest-remainder split of ``total`` into ``bins`` near-equal parts."""
    if bins == 0:
        return []
    base, extra = divmod(total, bins)
    return [base + (1 if i < extra else 0) for i in range(bins)]


def _random_part(
    spec: SynthSpec, cache: dict[tuple, np.ndarray], node: HierLabel
) -> np.ndarray:
    """The node-specific random matrix, drifted from the parent's."""
    if node.path in cache:
        return cache[node.path]
    rng = np.random.default_rng([spec.seed, 7, *node.path])
    fresh = rng.dirichlet([_DIRICHLET_ALPHA] * 4, size=4)
    parent = node.parent
    if parent is None:
        part = fresh
    else:
        part = (1.0 - _CHILD_DRIFT) * _random_part(spec, cache, parent) + _CHILD_DRIFT * fresh
    cache[node.path] = part
    return part


def _node_chain(
    spec: SynthSpec, base: np.ndarray, cache: dict[tuple, np.ndarray], node: HierLabel
) -> np.ndarray:
    return (1.0 - spec.separability) * base + spec.separability * _random_part(
        spec, cache, node
    )


def _sample_sequence(rng: np.random.Generator, chain: np.ndarray, length: int) -> str:
    cumulative = np.cumsum(chain, axis=1)
    out = np.empty(length, dtype=np.int64)
    out[0] = rng.integers(4)
    draws = rng.random(length - 1)
    for i in range(1, length):
        out[i] = np.searchsorted(cumulative[out[i - 1]], draws[i - 1], side="right")
    return "".join(_BASES[min(b, 3)] for b in out)


def node_allocation(spec: SynthSpec) -> dict[HierLabel, int]:
    """Sample counts per node under the internal-label fraction."""
    taxonomy = spec.taxonomy
    nodes = taxonomy.nodes()
    leaves = taxonomy.leaves()
    internals = taxonomy.internal_nodes()
    total = spec.sequences_per_node * len(nodes)
    if not internals:
        internal_total = 0
    else:
        internal_total = round(spec.internal_label_fraction * total)
    leaf_counts = _even_split(total - internal_total, len(leaves))
    internal_counts = _even_split(internal_total, len(internals))
    allocation = dict(zip(leaves, leaf_counts))
    allocation.update(zip(internals, internal_counts))
    return {node: allocation[node] for node in nodes}


def generate(spec: SynthSpec) -> list[Sequence]:
    """Deterministic labeled sequences, in taxonomy preorder."""
    rng_base = np.random.default_rng([spec.seed, 3])
    base = rng_base.dirichlet([_DIRICHLET_ALPHA] * 4, size=4)
    random_parts: dict[tuple, np.ndarray] = {}
    records: list[Sequence] = []
    lo, hi = spec.length_range
    for node, count in node_allocation(spec).items():
        if count == 0:
            continue
        chain = _node_chain(spec, base, random_parts, node)
        rng = np.random.default_rng([spec.seed, 11, *node.path])
        lengths = rng.integers(lo, hi + 1, size=count)
        for i in range(count):
            records.append(
                Sequence(
                    id=f"synth-{node}-{i:04d}",
                    residues=_sample_sequence(rng, chain, int(lengths[i])),
                    label=node,
                )
            )
    return records
