"""Rooted class-hierarchy trees.

A taxonomy is the set of valid hierarchy labels, closed under prefixes: if
``1.1.1`` is a node then so are ``1.1`` and ``1``. The root is implicit (the
empty path) and is not a class. Children are kept sorted by their final path
component so every traversal is deterministic.
"""

from __future__ import annotations

import importlib.resources
from typing import IO, Iterable

from .errors import FormatError, TaxonomyError
from .labels import HierLabel, parse_label


class Taxonomy:
    """Immutable rooted tree of hierarchy labels."""

    def __init__(self, labels: Iterable[HierLabel], names: dict[HierLabel, str] | None = None):
        closed: set[HierLabel] = set()
        for label in labels:
            closed.add(label)
            closed.update(label.prefixes())
        if not closed:
            raise TaxonomyError("taxonomy needs at least one node")
        self._nodes = closed
        self._children: dict[tuple[int, ...], list[HierLabel]] = {(): []}
        for node in closed:
            self._children.setdefault(node.path, [])
            parent_path = node.path[:-1]
            self._children.setdefault(parent_path, []).append(node)
        for siblings in self._children.values():
            siblings.sort(key=lambda l: l.path[-1])
        self.names = dict(names or {})

    # -- structure queries ------------------------------------------------

    def __contains__(self, label: HierLabel) -> bool:
        return label in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def _require(self, label: HierLabel) -> None:
        if label not in self._nodes:
            raise TaxonomyError(f"label {label} is not a node of this taxonomy")

    @property
    def roots(self) -> list[HierLabel]:
        """Depth-1 nodes (children of the implicit root)."""
        return list(self._children[()])

    def children(self, label: HierLabel) -> list[HierLabel]:
        self._require(label)
        return list(self._children[label.path])

    def is_leaf(self, label: HierLabel) -> bool:
        self._require(label)
        return not self._children[label.path]

    def ancestors(self, label: HierLabel) -> list[HierLabel]:
        """Proper ancestors, shallowest first; root excluded."""
        self._require(label)
        return label.prefixes()

    def nodes(self) -> list[HierLabel]:
        """All nodes in preorder."""
        out: list[HierLabel] = []
        stack = list(reversed(self._children[()]))
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(self._children[node.path]))
        return out

    def internal_nodes(self) -> list[HierLabel]:
        """Non-leaf nodes in preorder (root excluded; it is not a label)."""
        return [n for n in self.nodes() if self._children[n.path]]

    def leaves(self) -> list[HierLabel]:
        return [n for n in self.nodes() if not self._children[n.path]]

    def enumerate_paths(self) -> list[list[HierLabel]]:
        """One root-to-node path per node, in preorder.

        A node identifies the path ending at it, so the path for ``1.1`` is
        ``[1, 1.1]``.
        """
        return [node.prefixes() + [node] for node in self.nodes()]

    @property
    def max_depth(self) -> int:
        return max(len(n.path) for n in self._nodes)

    def classes_per_level(self) -> list[int]:
        """Node counts by depth, index 0 = depth 1."""
        counts = [0] * self.max_depth
        for node in self._nodes:
            counts[len(node.path) - 1] += 1
        return counts

    def __eq__(self, other) -> bool:
        return isinstance(other, Taxonomy) and self._nodes == other._nodes

    def __repr__(self) -> str:
        per_level = "/".join(str(c) for c in self.classes_per_level())
        return f"Taxonomy({len(self._nodes)} nodes, {per_level} per level)"


def build_from_labels(labels: Iterable[HierLabel]) -> Taxonomy:
    """Induce the smallest prefix-closed taxonomy containing all labels."""
    labels = list(labels)
    if not labels:
        raise TaxonomyError("cannot build a taxonomy from an empty label list")
    return Taxonomy(labels)


def read_taxonomy(source: IO[str]) -> Taxonomy:
    """Read a taxonomy text file: one ``dot.path<TAB>name`` per line.

    The name is optional; blank lines and ``#`` comments are skipped.
    """
    labels: list[HierLabel] = []
    names: dict[HierLabel, str] = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        token, _, name = line.partition("\t")
        try:
            label = parse_label(token)
        except FormatError as exc:
            raise FormatError(f"bad taxonomy node: {exc}", line=lineno) from None
        labels.append(label)
        if name.strip():
            names[label] = name.strip()
    if not labels:
        raise FormatError("taxonomy file contains no nodes")
    return Taxonomy(labels, names)


def load_taxonomy(path) -> Taxonomy:
    with open(path, "r", encoding="utf-8") as fh:
        return read_taxonomy(fh)


def write_taxonomy(taxonomy: Taxonomy, sink: IO[str]) -> None:
    for node in taxonomy.nodes():
        name = taxonomy.names.get(node, "")
        sink.write(f"{node}\t{name}\n" if name else f"{node}\n")


def wicker_taxonomy() -> Taxonomy:
    """The bundled transcription of Wicker's unified TE classification.

    Class I retrotransposons and Class II DNA transposons down to the
    superfamily level, with the Class II subclass tier in between, so Class I
    superfamilies sit at depth 3 and Class II superfamilies at depth 4.
    """
    resource = importlib.resources.files("tehier.data").joinpath("wicker.txt")
    with resource.open("r", encoding="utf-8") as fh:
        return read_taxonomy(fh)
