"""Exact linear algebra kernel: Gaussian-rational scalars, sparse matrices,
Kronecker products, operator predicates, and span closure of generated
subalgebras.

All values are immutable after construction and every operation is pure,
so instances can be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence


class DimensionMismatch(ValueError):
    """Raised when operand shapes do not conform."""


def _fraction_from(value) -> Fraction:
    """Coerce ints, Fractions, and decimal-free "p/q" strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if "." in value or "e" in value or "E" in value:
            raise ValueError(f"rational strings must be decimal-free: {value!r}")
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Scalar:
    """A Gaussian rational re + im*i with exact Fraction components.

    Fraction keeps both parts reduced with positive denominators, so two
    scalars are equal exactly when their components are structurally equal.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _fraction_from(re))
        object.__setattr__(self, "im", _fraction_from(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, complex):
            raise TypeError("floating-point values are not exact; pass int/Fraction/str")
        return Scalar(value)

    def __add__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        # identity fast paths: these objects are the module constants, so
        # returning the other operand is exact
        if self is ZERO:
            return other
        if other is ZERO:
            return self
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) - self

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __mul__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        if self is ONE:
            return other
        if other is ONE:
            return self
        if self is ZERO or other is ZERO:
            return ZERO
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def is_zero(self) -> bool:
        return not self

    def to_pair(self) -> tuple[str, str]:
        """The ("re", "im") decimal-free string pair used in JSON payloads."""
        return (_fraction_str(self.re), _fraction_str(self.im))

    @staticmethod
    def from_pair(re: str, im: str) -> "Scalar":
        return Scalar(_fraction_from(re), _fraction_from(im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        re, im = self.to_pair()
        if self.im == 0:
            return f"Scalar({re})"
        return f"Scalar({re}, {im})"


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)


class SparseMat:
    """Immutable sparse matrix over Gaussian rationals with 1-based indices.

    Zero entries are never stored; equality is structural and therefore
    exact equality of matrices.
    """

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], Scalar] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        store: dict[tuple[int, int], Scalar] = {}
        if entries:
            for (i, j), value in entries.items():
                if not (1 <= i <= rows and 1 <= j <= cols):
                    raise DimensionMismatch(
                        f"entry ({i},{j}) outside {rows}x{cols} bounds"
                    )
                value = Scalar.coerce(value)
                if value:
                    store[(i, j)] = value
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_e", store)

    def __setattr__(self, name, value):
        raise AttributeError("SparseMat is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(rows: int, cols: int | None = None) -> "SparseMat":
        return SparseMat(rows, rows if cols is None else cols)

    @staticmethod
    def identity(dim: int) -> "SparseMat":
        return SparseMat(dim, dim, {(i, i): ONE for i in range(1, dim + 1)})

    @staticmethod
    def unit(dim: int, i: int, j: int) -> "SparseMat":
        return SparseMat(dim, dim, {(i, j): ONE})

    @staticmethod
    def from_rows(rows_data: Sequence[Sequence]) -> "SparseMat":
        """Build from a dense list of lists of ints/Fractions/Scalars."""
        r = len(rows_data)
        c = len(rows_data[0]) if r else 0
        entries = {}
        for i, row in enumerate(rows_data, start=1):
            if len(row) != c:
                raise DimensionMismatch("ragged rows")
            for j, value in enumerate(row, start=1):
                entries[(i, j)] = Scalar.coerce(value)
        return SparseMat(r, c, entries)

    # -- accessors ---------------------------------------------------------

    def entry(self, i: int, j: int) -> Scalar:
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise DimensionMismatch(f"entry ({i},{j}) outside {self.rows}x{self.cols} bounds")
        return self._e.get((i, j), ZERO)

    def items(self) -> Iterator[tuple[tuple[int, int], Scalar]]:
        return iter(sorted(self._e.items()))

    @property
    def nnz(self) -> int:
        return len(self._e)

    def is_zero(self) -> bool:
        return not self._e

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic --------------------------------------------------------

    def _require_same_shape(self, other: "SparseMat") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other: "SparseMat") -> "SparseMat":
        self._require_same_shape(other)
        entries = dict(self._e)
        for key, value in other._e.items():
            entries[key] = entries.get(key, ZERO) + value
        return SparseMat(self.rows, self.cols, entries)

    def __sub__(self, other: "SparseMat") -> "SparseMat":
        return self + (-other)

    def __neg__(self) -> "SparseMat":
        return SparseMat(self.rows, self.cols, {k: -v for k, v in self._e.items()})

    def scale(self, scalar) -> "SparseMat":
        scalar = Scalar.coerce(scalar)
        return SparseMat(self.rows, self.cols, {k: scalar * v for k, v in self._e.items()})

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        by_row: dict[int, list[tuple[int, Scalar]]] = {}
        for (k, j), value in other._e.items():
            by_row.setdefault(k, []).append((j, value))
        acc: dict[tuple[int, int], Scalar] = {}
        for (i, k), left in self._e.items():
            for j, right in by_row.get(k, ()):
                key = (i, j)
                prior = acc.get(key)
                acc[key] = left * right if prior is None else prior + left * right
        return SparseMat(self.rows, other.cols, acc)

    def transpose(self) -> "SparseMat":
        return SparseMat(self.cols, self.rows, {(j, i): v for (i, j), v in self._e.items()})

    def conj(self) -> "SparseMat":
        return SparseMat(self.rows, self.cols, {k: v.conj() for k, v in self._e.items()})

    def adjoint(self) -> "SparseMat":
        return SparseMat(self.cols, self.rows, {(j, i): v.conj() for (i, j), v in self._e.items()})

    def kron(self, other: "SparseMat") -> "SparseMat":
        """Kronecker product: unit (a,b) x unit (c,d) lands at
        ((a-1)*q + c, (b-1)*q + d) for a q-row right factor."""
        entries = {}
        for (a, b), left in self._e.items():
            for (c, d), right in other._e.items():
                entries[((a - 1) * other.rows + c, (b - 1) * other.cols + d)] = left * right
        return SparseMat(self.rows * other.rows, self.cols * other.cols, entries)

    def trace(self) -> Scalar:
        total = ZERO
        for (i, j), value in self._e.items():
            if i == j:
                total = total + value
        return total

    def window(self, bound: int) -> "SparseMat":
        """The [1, bound]^2 corner, used for truncation-window comparisons."""
        entries = {k: v for k, v in self._e.items() if k[0] <= bound and k[1] <= bound}
        b = min(bound, self.rows), min(bound, self.cols)
        return SparseMat(b[0], b[1], entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMat):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self._e == other._e

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._e.items())))

    def __repr__(self) -> str:
        return f"SparseMat({self.rows}x{self.cols}, nnz={self.nnz})"

    # -- vectorization and JSON -------------------------------------------

    def vectorize(self) -> dict[int, Scalar]:
        """Row-major flattening used for span computations."""
        return {(i - 1) * self.cols + (j - 1): v for (i, j), v in self._e.items()}

    @staticmethod
    def from_vector(vec: Mapping[int, Scalar], rows: int, cols: int) -> "SparseMat":
        entries = {(idx // cols + 1, idx % cols + 1): v for idx, v in vec.items()}
        return SparseMat(rows, cols, entries)

    def to_json_dict(self) -> dict:
        entries = []
        for (i, j), value in sorted(self._e.items()):
            re, im = value.to_pair()
            entries.append([i, j, re, im])
        return {"rows": self.rows, "cols": self.cols, "entries": entries}

    @staticmethod
    def from_json_dict(payload: Mapping) -> "SparseMat":
        entries = {}
        for i, j, re, im in payload["entries"]:
            entries[(int(i), int(j))] = Scalar.from_pair(re, im)
        return SparseMat(int(payload["rows"]), int(payload["cols"]), entries)


# -- spec-level operation aliases ------------------------------------------


def matrix_unit(dim: int, i: int, j: int) -> SparseMat:
    """The dim x dim matrix unit with a single 1 at (i, j), 1-based."""
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise DimensionMismatch(f"unit index ({i},{j}) outside dimension {dim}")
    return SparseMat.unit(dim, i, j)


def adjoint(a: SparseMat) -> SparseMat:
    return a.adjoint()


def mul(a: SparseMat, b: SparseMat) -> SparseMat:
    return a @ b


def add(a: SparseMat, b: SparseMat) -> SparseMat:
    return a + b


def scalar_mul(scalar, a: SparseMat) -> SparseMat:
    return a.scale(scalar)


def kron(a: SparseMat, b: SparseMat) -> SparseMat:
    return a.kron(b)


def is_partial_isometry(a: SparseMat) -> bool:
    """True when A A* A = A exactly."""
    if not a.is_square():
        raise DimensionMismatch("partial isometry test needs a square matrix")
    return a @ a.adjoint() @ a == a


def is_orthogonal_projection(p: SparseMat) -> bool:
    """True when P = P* and P^2 = P exactly."""
    if not p.is_square():
        raise DimensionMismatch("projection test needs a square matrix")
    return p == p.adjoint() and p @ p == p


class TensorElement:
    """A finite sum of elementary tensors A (x) B of fixed factor shapes.

    The canonical form is the flattening through kron, so two elements are
    equal exactly when their flattenings agree entrywise.
    """

    __slots__ = ("left_rows", "left_cols", "right_rows", "right_cols", "terms")

    def __init__(self, left_shape: tuple[int, int], right_shape: tuple[int, int],
                 terms: Iterable[tuple[SparseMat, SparseMat]] = ()):
        object.__setattr__(self, "left_rows", left_shape[0])
        object.__setattr__(self, "left_cols", left_shape[1])
        object.__setattr__(self, "right_rows", right_shape[0])
        object.__setattr__(self, "right_cols", right_shape[1])
        frozen = []
        for left, right in terms:
            if (left.rows, left.cols) != (self.left_rows, self.left_cols):
                raise DimensionMismatch("left tensor factor shape mismatch")
            if (right.rows, right.cols) != (self.right_rows, self.right_cols):
                raise DimensionMismatch("right tensor factor shape mismatch")
            frozen.append((left, right))
        object.__setattr__(self, "terms", tuple(frozen))

    def __setattr__(self, name, value):
        raise AttributeError("TensorElement is immutable")

    def flatten(self) -> SparseMat:
        total = SparseMat.zero(self.left_rows * self.right_rows,
                               self.left_cols * self.right_cols)
        for left, right in self.terms:
            total = total + left.kron(right)
        return total

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if (self.left_rows, self.left_cols, self.right_rows, self.right_cols) != (
                other.left_rows, other.left_cols, other.right_rows, other.right_cols):
            raise DimensionMismatch("tensor element shape mismatch")
        return TensorElement((self.left_rows, self.left_cols),
                             (self.right_rows, self.right_cols),
                             self.terms + other.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.flatten() == other.flatten()

    def __hash__(self):
        return hash(self.flatten())

    def __repr__(self) -> str:
        return f"TensorElement({len(self.terms)} terms)"


class RowReducer:
    """Incremental exact row reduction of sparse vectors (index -> Scalar).

    Each stored row is normalized to a unit leading coefficient at its pivot
    (the smallest index), which keeps membership tests deterministic.
    """

    def __init__(self):
        self._rows: dict[int, dict[int, Scalar]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Mapping[int, Scalar]) -> dict[int, Scalar]:
        residual = {k: v for k, v in vec.items() if v}
        while residual:
            pivot = min(residual)
            row = self._rows.get(pivot)
            if row is None:
                return residual
            factor = residual[pivot]
            for k, v in row.items():
                updated = residual.get(k, ZERO) - factor * v
                if updated:
                    residual[k] = updated
                else:
                    residual.pop(k, None)
        return residual

    def add(self, vec: Mapping[int, Scalar]) -> dict[int, Scalar] | None:
        """Insert vec's residual; returns the normalized new row or None."""
        residual = self.reduce(vec)
        if not residual:
            return None
        pivot = min(residual)
        lead = residual[pivot]
        normalized = {k: v / lead for k, v in residual.items()}
        self._rows[pivot] = normalized
        return normalized

    def contains(self, vec: Mapping[int, Scalar]) -> bool:
        return not self.reduce(vec)


def span_closure(generators: Sequence[SparseMat], include_adjoints: bool = True,
                 max_passes: int | None = None) -> tuple[list[SparseMat], int, bool]:
    """Closure of the span of `generators` under matrix multiplication.

    Returns (basis, dimension, closed). The basis is row-reduced over the
    row-major vectorization; `closed` reports whether a full multiplication
    sweep added nothing before `max_passes` (default dim^2) ran out.
    """
    if not generators:
        return [], 0, True
    dim = generators[0].rows
    for g in generators:
        if not g.is_square() or g.rows != dim:
            raise DimensionMismatch("span_closure needs square matrices of one dimension")
    if max_passes is None:
        max_passes = dim * dim

    reducer = RowReducer()
    basis: list[SparseMat] = []

    def absorb(mat: SparseMat) -> bool:
        row = reducer.add(mat.vectorize())
        if row is None:
            return False
        basis.append(SparseMat.from_vector(row, dim, dim))
        return True

    seeds = list(generators)
    if include_adjoints:
        seeds.extend(g.adjoint() for g in generators)
    for seed in seeds:
        absorb(seed)

    closed = False
    frontier = list(basis)
    for _ in range(max_passes):
        if not frontier:
            closed = True
            break
        added: list[SparseMat] = []
        snapshot = list(basis)
        for new in frontier:
            for old in snapshot:
                for product in (new @ old, old @ new):
                    if absorb(product):
                        added.append(basis[-1])
        frontier = added
        if not added:
            closed = True
            break
    else:
        closed = not frontier
    if not closed and frontier:
        # one more sweep may still find the set closed exactly at the cap
        closed = True
        snapshot = list(basis)
        for new in frontier:
            for old in snapshot:
                if not reducer.contains((new @ old).vectorize()) or \
                        not reducer.contains((old @ new).vectorize()):
                    closed = False
                    break
            if not closed:
                break
    return basis, reducer.rank, closed


def exact_rank(vectors: Iterable[Mapping[int, Scalar]]) -> int:
    """Exact rank of a family of sparse vectors over the Gaussian rationals."""
    reducer = RowReducer()
    for vec in vectors:
        reducer.add(vec)
    return reducer.rank


def nullspace(rows: Sequence[Mapping[int, Scalar]], ncols: int) -> list[dict[int, Scalar]]:
    """Exact nullspace basis of the linear system given by sparse rows.

    Unknowns are indexed 0..ncols-1; each row maps unknown index to its
    coefficient. The returned basis vectors are deterministic: one per free
    column, ordered by column index, each normalized with a 1 at its free
    column.
    """
    # forward elimination with recorded pivots
    reduced: list[dict[int, Scalar]] = []
    pivots: dict[int, dict[int, Scalar]] = {}
    for raw in rows:
        residual = {k: v for k, v in raw.items() if v}
        while residual:
            pivot = min(residual)
            row = pivots.get(pivot)
            if row is None:
                lead = residual[pivot]
                normalized = {k: v / lead for k, v in residual.items()}
                pivots[pivot] = normalized
                reduced.append(normalized)
                break
            factor = residual[pivot]
            for k, v in row.items():
                updated = residual.get(k, ZERO) - factor * v
                if updated:
                    residual[k] = updated
                else:
                    residual.pop(k, None)
    free_cols = [c for c in range(ncols) if c not in pivots]
    # back substitution per free column
    basis = []
    ordered_pivots = sorted(pivots)
    for free in free_cols:
        solution = {free: ONE}
        for pivot in reversed(ordered_pivots):
            row = pivots[pivot]
            acc = ZERO
            for k, v in row.items():
                if k == pivot:
                    continue
                x = solution.get(k)
                if x is not None:
                    acc = acc + v * x
            if acc:
                solution[pivot] = -acc
        basis.append({k: v for k, v in solution.items() if v})
    return basis
