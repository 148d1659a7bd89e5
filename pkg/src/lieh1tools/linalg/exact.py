import dataclasses as dc
import enum
import heapq
import logging
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

log = logging.getLogger(__name__)

Scalar = Fraction
ScalarLike = Union[int, Fraction, str]
Row = Dict[int, Fraction]

_RATIONAL_PATTERN = re.compile(r"-?[0-9]+(/[0-9]+)?")


def parse_scalar(text: str) -> Fraction:
    """ Parse 'p', 'p/q' or '-p/q'. Decimal notation is rejected. """
    if not isinstance(text, str) or _RATIONAL_PATTERN.fullmatch(text) is None:
        raise ValueError(f"'{text}' is not an exact rational, expected 'p' or 'p/q'.")
    numerator, _, denominator = text.partition("/")
    if denominator and int(denominator) == 0:
        raise ValueError(f"'{text}' has a zero denominator.")
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def format_scalar(value: ScalarLike) -> str:
    return str(as_scalar(value))


def as_scalar(value: ScalarLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{value!r} is not an exact scalar.")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise ValueError(f"{value!r} is not an exact scalar.")


@dc.dataclass(frozen=True)
class SparseVector:
    size: int
    entries: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"Vector size must be non-negative, got {self.size}.")
        previous = -1
        for col, value in self.entries:
            if col <= previous or col >= self.size:
                raise ValueError(f"Column {col} is out of order or outside a vector of size {self.size}.")
            if value == 0:
                raise ValueError(f"Stored zero at column {col}.")
            previous = col

    @classmethod
    def from_mapping(cls, size: int, mapping: Mapping[int, ScalarLike]):
        entries = []
        for col, value in sorted(mapping.items()):
            value = as_scalar(value)
            if value:
                entries.append((int(col), value))
        return cls(size=size, entries=tuple(entries))

    @classmethod
    def from_dense(cls, values: Sequence[ScalarLike]):
        return cls.from_mapping(len(values), dict(enumerate(values)))

    def to_dict(self) -> Row:
        return dict(self.entries)

    def to_dense(self) -> List[Fraction]:
        dense = [Fraction(0)] * self.size
        for col, value in self.entries:
            dense[col] = value
        return dense

    def __getitem__(self, col: int) -> Fraction:
        return self.to_dict().get(col, Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def to_json(self):
        return [[col, format_scalar(value)] for col, value in self.entries]


@dc.dataclass(frozen=True)
class SparseMatrix:
    num_cols: int
    rows: Tuple[SparseVector, ...] = ()

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if row.size != self.num_cols:
                raise ValueError(f"Row {i} has size {row.size}, expected {self.num_cols}.")

    @classmethod
    def from_rows(cls, num_cols: int, rows: Iterable[Mapping[int, ScalarLike]]):
        return cls(num_cols=num_cols, rows=tuple(SparseVector.from_mapping(num_cols, row) for row in rows))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[ScalarLike]], num_cols: Optional[int] = None):
        if num_cols is None:
            num_cols = len(rows[0]) if rows else 0
        if any(len(row) != num_cols for row in rows):
            raise ValueError("Dense rows have unequal lengths.")
        return cls.from_rows(num_cols, (dict(enumerate(row)) for row in rows))

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows(n, ({i: 1} for i in range(n)))

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def apply(self, vector: SparseVector) -> SparseVector:
        if vector.size != self.num_cols:
            raise ValueError(f"Cannot apply a {self.num_rows}x{self.num_cols} matrix to a vector of size {vector.size}.")
        x = vector.to_dict()
        values = {}
        for i, row in enumerate(self.rows):
            values[i] = sum((value * x[col] for col, value in row.entries if col in x), Fraction(0))
        return SparseVector.from_mapping(self.num_rows, values)

    def permuted(self, order: Sequence[int]):
        return SparseMatrix(num_cols=self.num_cols, rows=tuple(self.rows[i] for i in order))


@dc.dataclass(frozen=True)
class SolveResult:
    rank: int
    kernel: Tuple[SparseVector, ...]
    pivots: Tuple[int, ...]

    @property
    def nullity(self) -> int:
        return len(self.kernel)


class Infeasible(enum.Enum):
    INFEASIBLE = "INFEASIBLE"


INFEASIBLE = Infeasible.INFEASIBLE


class Echelon:
    """ Online row reduction. A new row is reduced against the stored rows and, if a remainder is left, stored with
    its lowest column as pivot, normalized to 1. The fully reduced form is unique, so results do not depend on the
    order in which rows arrive. """

    def __init__(self, rows: Iterable[Mapping[int, ScalarLike]] = ()):
        self._pivot_rows: Dict[int, Row] = {}
        for row in rows:
            self.add(row)

    @property
    def rank(self) -> int:
        return len(self._pivot_rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(sorted(self._pivot_rows))

    def reduce(self, row: Mapping[int, ScalarLike]) -> Row:
        remainder = {col: Fraction(value) for col, value in row.items() if value}
        queue = [col for col in remainder if col in self._pivot_rows]
        heapq.heapify(queue)
        while queue:
            col = heapq.heappop(queue)
            coeff = remainder.get(col)
            if not coeff:
                continue
            for c, v in self._pivot_rows[col].items():
                new = remainder.get(c, 0) - coeff * v
                if new:
                    if c not in remainder and c in self._pivot_rows:
                        heapq.heappush(queue, c)
                    remainder[c] = new
                else:
                    remainder.pop(c, None)
        return remainder

    def add(self, row: Mapping[int, ScalarLike]) -> Optional[int]:
        """ Returns the new pivot column, or None if the row is already in the span. """
        remainder = self.reduce(row)
        if not remainder:
            return None
        pivot = min(remainder)
        lead = remainder[pivot]
        self._pivot_rows[pivot] = {c: v / lead for c, v in remainder.items()}
        return pivot

    def contains(self, row: Mapping[int, ScalarLike]) -> bool:
        return not self.reduce(row)

    def rref(self) -> Dict[int, Row]:
        reduced: Dict[int, Row] = {}
        for pivot in sorted(self._pivot_rows, reverse=True):
            row = dict(self._pivot_rows[pivot])
            for col in sorted(c for c in row if c != pivot and c in reduced):
                coeff = row.get(col)
                if not coeff:
                    continue
                for c, v in reduced[col].items():
                    new = row.get(c, 0) - coeff * v
                    if new:
                        row[c] = new
                    else:
                        row.pop(c, None)
            reduced[pivot] = row
        return reduced


def _kernel_from_rref(rref: Mapping[int, Row], num_cols: int) -> List[Row]:
    column_entries: Dict[int, List[Tuple[int, Fraction]]] = {}
    for pivot, row in rref.items():
        for col, value in row.items():
            if col != pivot:
                column_entries.setdefault(col, []).append((pivot, value))
    basis = []
    for free in range(num_cols):
        if free in rref:
            continue
        vector = {free: Fraction(1)}
        for pivot, value in column_entries.get(free, ()):
            vector[pivot] = -value
        basis.append(vector)
    return basis


def kernel_rows(rows: Iterable[Mapping[int, ScalarLike]], num_cols: int) -> Tuple[int, List[Row]]:
    """ Rank and kernel basis of a system given as raw column->value rows, one kernel vector per free column. """
    echelon = Echelon(rows)
    rref = echelon.rref()
    if rref and max(max(row) for row in rref.values()) >= num_cols:
        raise ValueError(f"System refers to columns beyond {num_cols}.")
    return echelon.rank, _kernel_from_rref(rref, num_cols)


def kernel(matrix: SparseMatrix) -> SolveResult:
    echelon = Echelon(row.to_dict() for row in matrix.rows)
    rref = echelon.rref()
    basis = _kernel_from_rref(rref, matrix.num_cols)
    log.debug("kernel: %d x %d, rank %d", matrix.num_rows, matrix.num_cols, echelon.rank)
    return SolveResult(rank=echelon.rank,
                       kernel=tuple(SparseVector.from_mapping(matrix.num_cols, vec) for vec in basis),
                       pivots=echelon.pivots)


def solve_affine(matrix: SparseMatrix,
                 rhs: SparseVector) -> Tuple[Union[SparseVector, Infeasible], Tuple[SparseVector, ...]]:
    if rhs.size != matrix.num_rows:
        raise ValueError(f"Right-hand side has length {rhs.size}, but the matrix has {matrix.num_rows} rows.")
    solution, basis = solve_affine_rows((row.to_dict() for row in matrix.rows), rhs.to_dense(), matrix.num_cols)
    homogeneous = tuple(SparseVector.from_mapping(matrix.num_cols, vec) for vec in basis)
    if solution is INFEASIBLE:
        return INFEASIBLE, homogeneous
    return SparseVector.from_mapping(matrix.num_cols, solution), homogeneous


def solve_affine_rows(rows: Iterable[Mapping[int, ScalarLike]], rhs: Sequence[ScalarLike],
                      num_cols: int) -> Tuple[Union[Row, Infeasible], List[Row]]:
    """ Solve rows * x = rhs. The right-hand side rides along as column num_cols. """
    echelon = Echelon()
    homogeneous = Echelon()
    for row, value in zip(rows, rhs):
        augmented = dict(row)
        homogeneous.add(augmented)
        if value:
            augmented[num_cols] = -as_scalar(value)
        echelon.add(augmented)
    basis = _kernel_from_rref(homogeneous.rref(), num_cols)
    rref = echelon.rref()
    if num_cols in rref:
        return INFEASIBLE, basis
    solution = {pivot: -row[num_cols] for pivot, row in rref.items() if num_cols in row}
    return solution, basis
