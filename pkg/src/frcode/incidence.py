"""Incidence structures and fractional repetition codes.

Blocks (storage nodes) index the rows of the incidence matrix and points
(coded packets) index the columns.  Each row is kept both as a frozenset of
point indices and as an integer bitmask; the bitmask form is what the
subset searches in :mod:`frcode.hierarchy` operate on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

MAX_POINTS = 4096


class FormatError(ValueError):
    """Malformed incidence matrix or matrix text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.detail = message
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class IncidenceStructure:
    num_blocks: int
    num_points: int
    rows: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.num_blocks < 1 or self.num_points < 1:
            raise FormatError("structure needs at least one block and one point")
        if self.num_points > MAX_POINTS:
            raise FormatError(f"v = {self.num_points} exceeds the cap of {MAX_POINTS} points")
        if len(self.rows) != self.num_blocks:
            raise FormatError(f"expected {self.num_blocks} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            for p in row:
                if not 0 <= p < self.num_points:
                    raise FormatError(f"row {i}: point {p} outside [0, {self.num_points})")

    @classmethod
    def from_rows(cls, num_points: int, rows: Iterable[Iterable[int]]) -> IncidenceStructure:
        rows = tuple(frozenset(r) for r in rows)
        return cls(len(rows), num_points, rows)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Row i as an int with bit p set iff point p is incident with block i."""
        out = []
        for row in self.rows:
            m = 0
            for p in row:
                m |= 1 << p
            out.append(m)
        return tuple(out)

    @property
    def shape(self) -> tuple[int, int]:
        return self.num_blocks, self.num_points

    def row_sums(self) -> list[int]:
        return [len(r) for r in self.rows]

    def column_sums(self) -> list[int]:
        sums = [0] * self.num_points
        for row in self.rows:
            for p in row:
                sums[p] += 1
        return sums

    def to_matrix(self) -> list[list[int]]:
        return [[1 if p in row else 0 for p in range(self.num_points)] for row in self.rows]

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class FrCode:
    """An incidence structure with constant row sum alpha and column sum rho."""

    structure: IncidenceStructure
    alpha: int
    rho: int

    def __post_init__(self) -> None:
        s = self.structure
        if any(len(r) != self.alpha for r in s.rows):
            raise ValueError(f"not every block has {self.alpha} points")
        if any(c != self.rho for c in s.column_sums()):
            raise ValueError(f"not every point lies in {self.rho} blocks")
        # Implied by the two checks above; kept as a guard on the arithmetic.
        assert s.num_blocks * self.alpha == s.num_points * self.rho

    @property
    def n(self) -> int:
        return self.structure.num_blocks

    @property
    def v(self) -> int:
        return self.structure.num_points

    @property
    def params(self) -> tuple[int, int, int, int]:
        """The tuple (n, alpha, v, rho)."""
        return self.n, self.alpha, self.v, self.rho

    @property
    def rows(self) -> tuple[frozenset[int], ...]:
        return self.structure.rows

    def dual(self) -> FrCode:
        return FrCode(dual(self.structure), self.rho, self.alpha)


@dataclass(frozen=True)
class RegularityReport:
    """Why a structure is not an FR code: the first row or column breaking regularity."""

    kind: str  # "row" or "column"
    index: int
    value: int
    expected: int

    def __str__(self) -> str:
        return (
            f"not regular: {self.kind} {self.index} has sum {self.value}, "
            f"expected {self.expected}"
        )


def from_matrix(rows: Sequence[Sequence[int]]) -> IncidenceStructure:
    if len(rows) == 0:
        raise FormatError("empty matrix")
    v = len(rows[0])
    if v == 0:
        raise FormatError("matrix has zero columns")
    out = []
    for i, row in enumerate(rows):
        if len(row) != v:
            raise FormatError(f"row {i} has length {len(row)}, expected {v}")
        points = set()
        for j, x in enumerate(row):
            if x == 1:
                points.add(j)
            elif x != 0:
                raise FormatError(f"entry ({i}, {j}) is {x!r}, expected 0 or 1")
        out.append(frozenset(points))
    return IncidenceStructure(len(out), v, tuple(out))


def validate_fr(s: IncidenceStructure) -> FrCode | RegularityReport:
    """Return the FR code view of ``s``, or a report naming the first irregular row/column."""
    row_sums = s.row_sums()
    alpha = row_sums[0]
    for i, r in enumerate(row_sums):
        if r != alpha:
            return RegularityReport("row", i, r, alpha)
    col_sums = s.column_sums()
    rho = col_sums[0]
    for j, c in enumerate(col_sums):
        if c != rho:
            return RegularityReport("column", j, c, rho)
    if alpha == 0:
        # all-zero matrix: constant sums, but neither parameter is positive
        return RegularityReport("row", 0, 0, 1)
    return FrCode(s, alpha, rho)


def as_fr_code(s: IncidenceStructure | FrCode) -> FrCode:
    """Like :func:`validate_fr` but raises ``ValueError`` on irregular input."""
    if isinstance(s, FrCode):
        return s
    res = validate_fr(s)
    if isinstance(res, RegularityReport):
        raise ValueError(str(res))
    return res


def dual(s: IncidenceStructure) -> IncidenceStructure:
    """The transpose structure: points become blocks and blocks become points."""
    cols: list[set[int]] = [set() for _ in range(s.num_points)]
    for i, row in enumerate(s.rows):
        for p in row:
            cols[p].add(i)
    return IncidenceStructure(s.num_points, s.num_blocks, tuple(frozenset(c) for c in cols))


def is_simple(s: IncidenceStructure) -> bool:
    return len(set(s.masks)) == s.num_blocks


def to_text(s: IncidenceStructure) -> str:
    lines = [f"{s.num_blocks} {s.num_points}"]
    for m in s.masks:
        lines.append("".join("1" if (m >> p) & 1 else "0" for p in range(s.num_points)))
    return "\n".join(lines) + "\n"


def parse_text(text: str, first_line: int = 1) -> IncidenceStructure:
    """Parse the ``n v`` header + n rows of 0/1 characters format.

    ``first_line`` offsets reported line numbers when the text is a slice of
    a larger file.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    idx = 0
    while idx < len(lines) and lines[idx].startswith("#"):
        idx += 1
    if idx == len(lines):
        raise FormatError("missing 'n v' header", first_line + idx)
    header = lines[idx].split(" ")
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise FormatError(f"bad header {lines[idx]!r}, expected 'n v'", first_line + idx)
    n, v = int(header[0]), int(header[1])
    if n < 1 or v < 1:
        raise FormatError("n and v must be positive", first_line + idx)
    body = lines[idx + 1:]
    if len(body) != n:
        raise FormatError(f"expected {n} rows, found {len(body)}", first_line + idx + 1 + min(n, len(body)))
    rows = []
    for r, line in enumerate(body):
        lineno = first_line + idx + 1 + r
        if len(line) != v:
            raise FormatError(f"row {r} has {len(line)} characters, expected {v}", lineno)
        if line.strip("01"):
            raise FormatError(f"row {r} contains characters other than 0/1", lineno)
        rows.append(frozenset(j for j, ch in enumerate(line) if ch == "1"))
    return IncidenceStructure(n, v, tuple(rows))


def read_structure(path) -> IncidenceStructure:
    with open(path, encoding="ascii") as fh:
        return parse_text(fh.read())


def write_structure(s: IncidenceStructure, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(to_text(s))
