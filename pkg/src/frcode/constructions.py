"""Graph-based FR codes, built-in fixtures, and the multi-record database format."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .incidence import (
    FormatError,
    FrCode,
    IncidenceStructure,
    RegularityReport,
    from_matrix,
    parse_text,
    to_text,
    validate_fr,
)


@dataclass(frozen=True)
class GraphSpec:
    num_vertices: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def from_regular_graph(g: GraphSpec) -> FrCode:
    """Edges become blocks, vertices become points; multi-edges give repeated blocks."""
    if not g.edges:
        raise ValueError("graph has no edges")
    for i, (a, b) in enumerate(g.edges):
        if not (0 <= a < g.num_vertices and 0 <= b < g.num_vertices):
            raise ValueError(f"edge {i} = ({a}, {b}) has an endpoint out of range")
        if a == b:
            raise ValueError(f"edge {i} is a self-loop at vertex {a}")
    deg = g.degrees()
    for u, d in enumerate(deg):
        if d != deg[0]:
            raise ValueError(f"graph is not regular: vertex {u} has degree {d}, vertex 0 has {deg[0]}")
    s = IncidenceStructure.from_rows(g.num_vertices, g.edges)
    return FrCode(s, 2, deg[0])


def complete_graph_edges(t: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(t), 2))


def complete_graph_code(t: int) -> FrCode:
    """Vertices of K_t as blocks over its edges (lexicographic order): a (t, t-1, t(t-1)/2, 2) code."""
    if t < 3:
        raise ValueError(f"t must be at least 3, got {t}")
    edges = complete_graph_edges(t)
    rows = [[j for j, e in enumerate(edges) if u in e] for u in range(t)]
    return FrCode(IncidenceStructure.from_rows(len(edges), rows), t - 1, 2)


def petersen_graph() -> GraphSpec:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges = sorted(tuple(sorted(e)) for e in outer + spokes + inner)
    return GraphSpec(10, tuple(edges))


def _bits(lines: str) -> list[list[int]]:
    return [[int(c) for c in line] for line in lines.split()]


EXAMPLE2_MATRIX = _bits("""
    1111000000
    1000111000
    0100100110
    0010010101
    0001001011
""")

EXAMPLE2_DUAL_MATRIX = _bits("""
    11000
    10100
    10010
    10001
    01100
    01010
    01001
    00110
    00101
    00011
""")

# Printed row order is kept as is.  The underlying cubic graph has the
# triangle formed by rows 3, 4 and 9, so it is not actually the Petersen
# graph; the fixture name is kept for CLI compatibility.
EXAMPLE3_MATRIX = _bits("""
    1100000000
    1010000000
    1001000000
    0100100000
    0100010000
    0010001000
    0010000100
    0001000010
    0001000001
    0000110000
    0000101000
    0000010100
    0000001010
    0000000101
    0000000011
""")

EXAMPLE3_EDGES = tuple(
    tuple(j for j, x in enumerate(row) if x) for row in EXAMPLE3_MATRIX
)


def _fixture_builders():
    return {
        "example2": lambda: from_matrix(EXAMPLE2_MATRIX),
        "example2-dual": lambda: from_matrix(EXAMPLE2_DUAL_MATRIX),
        "example3-petersen": lambda: from_matrix(EXAMPLE3_MATRIX),
    }


FIXTURES = tuple(_fixture_builders())


def fixture(name: str) -> IncidenceStructure:
    try:
        return _fixture_builders()[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


class Record(NamedTuple):
    label: str
    structure: IncidenceStructure
    validation: FrCode | RegularityReport


class DatabaseError(FormatError):
    def __init__(self, message: str, record: int, line: int | None):
        self.record = record
        super().__init__(f"record {record}: {message}", line)


def _split_records(text: str):
    """Yield (first_line_number, chunk) for blank-line separated chunks."""
    chunk, start = [], None
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.strip() == "":
            if chunk:
                yield start, "\n".join(chunk) + "\n"
                chunk = []
            continue
        if not chunk:
            start = lineno
        chunk.append(line)
    if chunk:
        yield start, "\n".join(chunk) + "\n"


def parse_database(text: str, lenient: bool = False, errors: list | None = None) -> list[Record]:
    """Parse blank-line separated records, each introduced by ``# label: <name>``.

    With ``lenient`` a malformed record is skipped (and appended to ``errors``
    if given) instead of aborting the whole parse.
    """
    records = []
    for index, (start, chunk) in enumerate(_split_records(text)):
        label = None
        for line in chunk.split("\n"):
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if body.startswith("label:"):
                label = body[len("label:"):].strip()
        try:
            if label is None:
                raise FormatError("missing '# label:' header", start)
            s = parse_text(chunk, first_line=start)
        except FormatError as exc:
            err = DatabaseError(exc.detail, index, exc.line)
            if not lenient:
                raise err from exc
            if errors is not None:
                errors.append(err)
            continue
        records.append(Record(label, s, validate_fr(s)))
    return records


def load_database(path, lenient: bool = False, errors: list | None = None) -> list[Record]:
    return parse_database(Path(path).read_text(encoding="ascii"), lenient, errors)


def format_database(records) -> str:
    parts = [f"# label: {label}\n" + to_text(s) for label, s, *_ in records]
    return "\n".join(parts)


def dump_database(records, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_database(records))
