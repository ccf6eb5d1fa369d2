"""FASTA and feature-CSV input/output.

FASTA records may carry a hierarchy label as the second whitespace-delimited
header token (``>id 1.1.1``). Feature CSV files have a mandatory header of
canonical k-mer column names, one row per sequence, and an optional trailing
``label`` column. Both formats round-trip exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .errors import FormatError, LabelParseError
from .kmers import KmerConfig, canonical_feature_order
from .labels import HierLabel, parse_label, render_label

# Uppercase nucleotide alphabet: the four bases plus IUPAC ambiguity codes.
NUCLEOTIDE_ALPHABET = frozenset("ACGTNRYSWKMBDHV")

_FASTA_WRAP = 70


@dataclass(frozen=True)
class Sequence:
    """One nucleotide sequence with an optional hierarchy label."""

    id: str
    residues: str
    label: HierLabel | None = None

    def __post_init__(self):
        if not self.id or any(c.isspace() for c in self.id):
            raise FormatError(f"sequence id {self.id!r} must be nonempty without whitespace")
        if not self.residues:
            raise FormatError(f"sequence {self.id!r} has no residues")
        bad = set(self.residues) - NUCLEOTIDE_ALPHABET
        if bad:
            raise FormatError(
                f"sequence {self.id!r} contains illegal characters {sorted(bad)!r}"
            )


def _as_text_lines(source) -> Iterable[str]:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8")).readlines()
    if isinstance(source, str):
        return io.StringIO(source).readlines()
    first = getattr(source, "read", None)
    if first is None:
        raise TypeError(f"cannot read FASTA from {type(source).__name__}")
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data).readlines()


def parse_fasta(source) -> list[Sequence]:
    """Parse FASTA text, bytes, or a readable stream into Sequence records.

    Multi-line bodies are concatenated, residues are uppercased, and a second
    header token is parsed as the record's hierarchy label. Line endings may
    be LF or CRLF. Raises FormatError (with a line number where possible) for
    structural problems and LabelParseError for bad label tokens.
    """
    records: list[Sequence] = []
    header_line = 0
    seq_id = None
    label: HierLabel | None = None
    body: list[str] = []

    def flush():
        if seq_id is None:
            return
        residues = "".join(body)
        if not residues:
            raise FormatError(f"record {seq_id!r} has no sequence lines", line=header_line)
        records.append(Sequence(id=seq_id, residues=residues, label=label))

    for lineno, raw in enumerate(_as_text_lines(source), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith(">"):
            flush()
            header_line = lineno
            tokens = line[1:].split()
            if not tokens:
                raise FormatError("header has no sequence id", line=lineno)
            seq_id = tokens[0]
            label = None
            if len(tokens) > 1:
                try:
                    label = parse_label(tokens[1])
                except LabelParseError as exc:
                    raise LabelParseError(
                        f"bad label token in header of {seq_id!r}: {exc}", line=lineno
                    ) from None
            body = []
        else:
            if seq_id is None:
                raise FormatError("sequence data before any '>' header", line=lineno)
            chunk = line.strip().upper()
            bad = set(chunk) - NUCLEOTIDE_ALPHABET
            if bad:
                raise FormatError(
                    f"illegal character(s) {sorted(bad)!r} in sequence {seq_id!r}",
                    line=lineno,
                )
            body.append(chunk)
    flush()
    if not records:
        raise FormatError("no sequences found in input")
    return records


def read_fasta(path) -> list[Sequence]:
    with open(path, "rb") as fh:
        return parse_fasta(fh)


def write_fasta(sequences: Iterable[Sequence], sink: IO[str]) -> None:
    """Write records so that parse_fasta reads back identical sequences."""
    for seq in sequences:
        header = f">{seq.id}"
        if seq.label is not None:
            header += f" {render_label(seq.label)}"
        sink.write(header + "\n")
        for start in range(0, len(seq.residues), _FASTA_WRAP):
            sink.write(seq.residues[start : start + _FASTA_WRAP] + "\n")


def save_fasta(sequences: Iterable[Sequence], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_fasta(sequences, fh)


def read_feature_csv(
    source, config: KmerConfig | None = None
) -> list[tuple[np.ndarray, HierLabel | None]]:
    """Read a feature CSV into (vector, optional label) records.

    The header must list the canonical k-mer names for ``config`` (default
    K=2,3,4), optionally followed by a ``label`` column. Raises FormatError
    with the offending row number for layout or numeric problems.
    """
    config = config or KmerConfig()
    expected = canonical_feature_order(config)
    dim = len(expected)

    lines = _as_text_lines(source)
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("feature CSV is empty (missing header row)") from None

    labeled = bool(header) and header[-1].strip().lower() == "label"
    feature_names = header[:-1] if labeled else header
    if len(feature_names) != dim:
        raise FormatError(
            f"expected {dim} features, header has {len(feature_names)}", line=1
        )
    if feature_names != expected:
        mismatch = next(
            (i for i, (a, b) in enumerate(zip(feature_names, expected)) if a != b)
        )
        raise FormatError(
            f"feature column {mismatch + 1} is {feature_names[mismatch]!r}, "
            f"expected canonical k-mer {expected[mismatch]!r}",
            line=1,
        )

    records: list[tuple[np.ndarray, HierLabel | None]] = []
    width = dim + 1 if labeled else dim
    for rowno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != width:
            raise FormatError(
                f"expected {dim} features, row has {len(row) - (1 if labeled else 0)}",
                line=rowno,
            )
        try:
            vector = np.array([float(cell) for cell in row[:dim]], dtype=np.float64)
        except ValueError:
            bad = next(c for c in row[:dim] if not _is_number(c))
            raise FormatError(f"non-numeric feature value {bad!r}", line=rowno) from None
        label = None
        if labeled:
            token = row[dim].strip()
            if token:
                try:
                    label = parse_label(token)
                except LabelParseError as exc:
                    raise LabelParseError(str(exc), line=rowno) from None
        records.append((vector, label))
    return records


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def write_feature_csv(
    records: Iterable[tuple[np.ndarray, HierLabel | None]],
    sink: IO[str],
    config: KmerConfig | None = None,
) -> None:
    """Write feature vectors (and labels, when any record carries one).

    Values are written with shortest round-trip float formatting, so reading
    the file back reproduces the vectors bit for bit.
    """
    config = config or KmerConfig()
    names = canonical_feature_order(config)
    records = list(records)
    labeled = any(label is not None for _, label in records)
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(names + ["label"] if labeled else names)
    for vector, label in records:
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (len(names),):
            raise FormatError(
                f"vector has {vector.shape[0] if vector.ndim == 1 else vector.shape} "
                f"values, expected {len(names)}"
            )
        row = [repr(float(v)) for v in vector]
        if labeled:
            row.append(render_label(label) if label is not None else "")
        writer.writerow(row)
