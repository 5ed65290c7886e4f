"""Magic unitaries: scalar (permutation) candidates, block candidates with
projection entries, and the commutant search for permutation matrices that
commute with a given 0/1 adjacency matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact_linalg import ONE, SparseMat, is_orthogonal_projection


@dataclass(frozen=True)
class ScalarMagicUnitary:
    """A permutation matrix recorded column-wise: perm[j-1] = i means the
    single 1 of column j sits in row i."""

    perm: tuple[int, ...]

    def __post_init__(self):
        d = len(self.perm)
        if sorted(self.perm) != list(range(1, d + 1)):
            raise ValueError("perm must be a bijection of 1..d")

    @property
    def dim(self) -> int:
        return len(self.perm)

    def to_sparse(self) -> SparseMat:
        return SparseMat(self.dim, self.dim,
                         {(row, col + 1): ONE for col, row in enumerate(self.perm)})

    def apply(self, j: int) -> int:
        return self.perm[j - 1]

    def inverse(self) -> "ScalarMagicUnitary":
        inv = [0] * self.dim
        for col, row in enumerate(self.perm, start=1):
            inv[row - 1] = col
        return ScalarMagicUnitary(tuple(inv))

    def compose(self, other: "ScalarMagicUnitary") -> "ScalarMagicUnitary":
        """Matrix product self @ other as permutations."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return ScalarMagicUnitary(tuple(self.apply(other.apply(j))
                                        for j in range(1, self.dim + 1)))

    def is_identity(self) -> bool:
        return all(self.apply(j) == j for j in range(1, self.dim + 1))

    def cycle_text(self) -> str:
        """Disjoint-cycle rendering, fixed points included: "(1)(2 3)(4)"."""
        seen = set()
        parts = []
        for start in range(1, self.dim + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.apply(start)
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.apply(nxt)
            parts.append("(" + " ".join(str(x) for x in cycle) + ")")
        return "".join(parts)


def pi_n(n: int) -> ScalarMagicUnitary:
    """The involution swapping grid positions (i,j) and (j,i) under row-major
    numbering; its matrix is the adjacency matrix of the involution graph."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def idx(i: int, j: int) -> int:
        return (i - 1) * n + j

    perm = [0] * (n * n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            perm[idx(j, i) - 1] = idx(i, j)
    return ScalarMagicUnitary(tuple(perm))


def is_orthogonal_biunitary(u: ScalarMagicUnitary) -> bool:
    """Checks U = conj(U) and U U^t = U^t U = identity, exactly."""
    mat = u.to_sparse()
    if mat != mat.conj():
        return False
    ident = SparseMat.identity(u.dim)
    t = mat.transpose()
    return mat @ t == ident and t @ mat == ident


@dataclass(frozen=True)
class BlockMagicUnitary:
    """A d x d grid of m x m sparse blocks; a candidate magic unitary.

    Construction validates only shape conformance so that failing candidates
    can be represented and reported.
    """

    dim: int
    block_dim: int
    entries: tuple[tuple[SparseMat, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.dim:
            raise ValueError(f"expected {self.dim} block rows")
        for row in self.entries:
            if len(row) != self.dim:
                raise ValueError(f"expected {self.dim} blocks per row")
            for block in row:
                if block.rows != self.block_dim or block.cols != self.block_dim:
                    raise ValueError("block shape mismatch")

    def block(self, i: int, j: int) -> SparseMat:
        return self.entries[i - 1][j - 1]

    def flatten(self) -> SparseMat:
        """The d*m square matrix assembled from the blocks."""
        size = self.dim * self.block_dim
        entries = {}
        for i in range(1, self.dim + 1):
            for j in range(1, self.dim + 1):
                base_r = (i - 1) * self.block_dim
                base_c = (j - 1) * self.block_dim
                for (r, c), v in self.block(i, j).items():
                    entries[(base_r + r, base_c + c)] = v
        return SparseMat(size, size, entries)

    @staticmethod
    def from_scalar(u: ScalarMagicUnitary, block_dim: int = 1) -> "BlockMagicUnitary":
        """Lift a permutation candidate to blocks (identity blocks at the 1s)."""
        ident = SparseMat.identity(block_dim)
        zero = SparseMat.zero(block_dim, block_dim)
        grid = tuple(
            tuple(ident if u.apply(j) == i else zero for j in range(1, u.dim + 1))
            for i in range(1, u.dim + 1)
        )
        return BlockMagicUnitary(u.dim, block_dim, grid)


@dataclass(frozen=True)
class MagicReport:
    """Verdict of verify_magic: failure lists are empty iff passed."""

    projection_failures: tuple[tuple[int, int], ...]
    row_sum_failures: tuple[int, ...]
    col_sum_failures: tuple[int, ...]
    orthogonality_failures: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "projection_failures": [list(p) for p in self.projection_failures],
            "row_sum_failures": list(self.row_sum_failures),
            "col_sum_failures": list(self.col_sum_failures),
            "orthogonality_failures": [[list(a), list(b)]
                                       for a, b in self.orthogonality_failures],
            "passed": self.passed,
        }


def verify_magic(candidate: BlockMagicUnitary) -> MagicReport:
    """Checks the magic-unitary relations for a block candidate: every entry
    an orthogonal projection, unit row and column sums, and orthogonality of
    distinct entries sharing a row or a column."""
    d, m = candidate.dim, candidate.block_dim
    ident = SparseMat.identity(m)
    zero = SparseMat.zero(m, m)

    projection_failures = []
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if not is_orthogonal_projection(candidate.block(i, j)):
                projection_failures.append((i, j))

    row_sum_failures = []
    for i in range(1, d + 1):
        total = zero
        for j in range(1, d + 1):
            total = total + candidate.block(i, j)
        if total != ident:
            row_sum_failures.append(i)

    col_sum_failures = []
    for j in range(1, d + 1):
        total = zero
        for i in range(1, d + 1):
            total = total + candidate.block(i, j)
        if total != ident:
            col_sum_failures.append(j)

    orthogonality_failures = []
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            for k in range(j + 1, d + 1):
                if candidate.block(i, j) @ candidate.block(i, k) != zero:
                    orthogonality_failures.append(((i, j), (i, k)))
    for j in range(1, d + 1):
        for i in range(1, d + 1):
            for k in range(i + 1, d + 1):
                if candidate.block(i, j) @ candidate.block(k, j) != zero:
                    orthogonality_failures.append(((i, j), (k, j)))

    passed = not (projection_failures or row_sum_failures or col_sum_failures
                  or orthogonality_failures)
    return MagicReport(tuple(projection_failures), tuple(row_sum_failures),
                       tuple(col_sum_failures), tuple(orthogonality_failures), passed)


@dataclass(frozen=True)
class CommutantResult:
    """Permutation matrices commuting with the input, sorted by permutation
    word; `overflow` is set when the search stopped at `limit`."""

    perms: tuple[ScalarMagicUnitary, ...]
    overflow: bool

    @property
    def count(self) -> int:
        return len(self.perms)

    def contains(self, u: ScalarMagicUnitary) -> bool:
        return any(p.perm == u.perm for p in self.perms)

    def is_identity_and(self, u: ScalarMagicUnitary) -> bool:
        """True when the commutant is exactly {identity, u}."""
        expected = sorted({tuple(range(1, u.dim + 1)), u.perm})
        return [p.perm for p in self.perms] == expected


def commuting_magic_unitaries(a: SparseMat, limit: int = 10000) -> CommutantResult:
    """All permutation matrices P with P A = A P, by backtracking.

    The input must be a square 0/1 matrix. P given by sigma (column j maps to
    row sigma(j)) commutes with A exactly when A[sigma(i), sigma(j)] =
    A[i, j] for all pairs, so the search assigns images vertex by vertex,
    restricting candidates to equal (entry_degree, exit_degree) classes and
    checking consistency against all previously assigned vertices.
    """
    if not a.is_square():
        raise ValueError("commutant search needs a square matrix")
    d = a.rows
    for _, v in a.items():
        if v != ONE:
            raise ValueError("commutant search expects a 0/1 matrix")
    adj = {key for key, _ in a.items()}

    in_deg = [0] * (d + 1)
    out_deg = [0] * (d + 1)
    for (i, j) in adj:
        out_deg[i] += 1
        in_deg[j] += 1
    signature = [(in_deg[v], out_deg[v]) for v in range(d + 1)]

    classes: dict[tuple[int, int], list[int]] = {}
    for v in range(1, d + 1):
        classes.setdefault(signature[v], []).append(v)
    # assign vertices from the smallest degree class outward for pruning
    order = sorted(range(1, d + 1), key=lambda v: (len(classes[signature[v]]), v))

    results: list[tuple[int, ...]] = []
    overflow = False
    assigned: dict[int, int] = {}
    used: set[int] = set()

    def backtrack(depth: int) -> bool:
        if len(results) >= limit:
            return False
        if depth == d:
            image = tuple(assigned[v] for v in range(1, d + 1))
            results.append(image)
            return len(results) < limit
        v = order[depth]
        for w in classes[signature[v]]:
            if w in used:
                continue
            ok = True
            for u, img in assigned.items():
                if (((u, v) in adj) != ((img, w) in adj)) or \
                        (((v, u) in adj) != ((w, img) in adj)):
                    ok = False
                    break
            if ok and (((v, v) in adj) == ((w, w) in adj)):
                assigned[v] = w
                used.add(w)
                if not backtrack(depth + 1):
                    assigned.pop(v)
                    used.discard(w)
                    return False
                assigned.pop(v)
                used.discard(w)
        return True

    completed = backtrack(0)
    if not completed and len(results) >= limit:
        overflow = True
    perms = tuple(ScalarMagicUnitary(word) for word in sorted(results))
    return CommutantResult(perms, overflow)
