"""Cuntz-Krieger families over the generated graphs, with finite matrix
backings and truncated corners of operators on l2(N).

Truncation semantics: an operator given by affine index patterns is stored
as its N x N corner. A product of corners agrees with the corner of the
product only away from the truncation boundary, and patterns that rescale
indices (row stride != column stride) shrink the reliable region by their
stride ratio. Families therefore carry a comparison bound

    W = (N - margin) // ratio

where ratio is the worst stride ratio among the family's patterns, and all
equality verdicts compare the [1, W]^2 windows.

Relation orientation: writing s(e) for the arrow tail and r(e) for the
arrow head, the verifier checks

    (1)  S_e* S_e = P_{s(e)}            for every edge,
    (2)  P_v = sum over r(e) = v of S_e S_e*   at every vertex with
         incoming edges (skipped where there are none).

Projections are derived from relation (1) at vertices with outgoing edges
(the first outgoing edge defines P_v and the others are checked against it)
and from the relation (2) sum at vertices without them; the report records
the origin of each projection. This is the orientation under which the
published matrix families satisfy relation (1); see the report's
"convention" block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_linalg import ONE, Scalar, SparseMat, span_closure
from .quantum_graph import DirectedGraph, build_pi_graph, build_relation_graph, exit_degree
from .verdict import FAIL, NOT_APPLICABLE, PASS, Verdict, fail, not_applicable, ok


@dataclass(frozen=True)
class AffineRule:
    """One orbit of matrix-unit entries (a*k + b, c*k + d) for k >= 1.

    Index values below 1 are skipped, so offsets may shift the first live k.
    """

    row_stride: int
    row_offset: int
    col_stride: int
    col_offset: int

    def __post_init__(self):
        if self.row_stride < 1 or self.col_stride < 1:
            raise ValueError("strides must be positive")

    def entry(self, k: int) -> tuple[int, int]:
        return (self.row_stride * k + self.row_offset,
                self.col_stride * k + self.col_offset)

    @property
    def ratio(self) -> int:
        """Worst-case index rescaling of the rule in either direction."""
        hi = max(self.row_stride, self.col_stride)
        lo = min(self.row_stride, self.col_stride)
        return -(-hi // lo)


@dataclass(frozen=True)
class PatternOperator:
    """A sum of affine matrix-unit orbits with a common coefficient."""

    rules: tuple[AffineRule, ...]
    coefficient: Scalar = ONE

    def adjoint(self) -> "PatternOperator":
        swapped = tuple(AffineRule(r.col_stride, r.col_offset, r.row_stride, r.row_offset)
                        for r in self.rules)
        return PatternOperator(swapped, self.coefficient.conj())

    @property
    def ratio(self) -> int:
        return max((r.ratio for r in self.rules), default=1)

    def truncate(self, n: int) -> SparseMat:
        """The N x N corner. Collisions between orbit entries are an error,
        never silently merged."""
        entries: dict[tuple[int, int], Scalar] = {}
        for rule in self.rules:
            k_cap = n + abs(rule.row_offset) + abs(rule.col_offset) + 2
            for k in range(1, k_cap + 1):
                i, j = rule.entry(k)
                if i > n and j > n:
                    break
                if 1 <= i <= n and 1 <= j <= n:
                    if (i, j) in entries:
                        raise ValueError(f"pattern collision at entry ({i},{j})")
                    entries[(i, j)] = self.coefficient
        return SparseMat(n, n, entries)


def truncate(pattern: PatternOperator, n: int) -> SparseMat:
    return pattern.truncate(n)


@dataclass(frozen=True)
class FiniteBacking:
    """Operators are honest dim x dim matrices; comparisons are exact."""

    dim: int


@dataclass(frozen=True)
class TruncatedBacking:
    """Operators are N x N corners compared on the [1, window]^2 box."""

    n: int
    margin: int
    window: int


@dataclass(frozen=True)
class CKFamily:
    """Candidate Cuntz-Krieger data: one operator per edge, one projection
    per vertex, over a finite or truncated backing."""

    graph: DirectedGraph
    isometries: dict[str, SparseMat]
    projections: dict[str, SparseMat]
    backing: FiniteBacking | TruncatedBacking
    projection_origin: dict[str, str] = field(default_factory=dict)
    literal_projections: dict[str, SparseMat] | None = None
    experimental: bool = False
    name: str = ""

    def __post_init__(self):
        dim = self.backing.dim if isinstance(self.backing, FiniteBacking) else self.backing.n
        for label, op in self.isometries.items():
            if op.rows != dim or op.cols != dim:
                raise ValueError(f"operator {label!r} does not conform to backing {dim}")
        for label, op in self.projections.items():
            if op.rows != dim or op.cols != dim:
                raise ValueError(f"projection {label!r} does not conform to backing {dim}")
        if set(self.isometries) != set(self.graph.edge_labels()):
            raise ValueError("isometries must cover the edge set exactly")
        if set(self.projections) != set(self.graph.vertices):
            raise ValueError("projections must cover the vertex set exactly")

    @property
    def comparison_bound(self) -> int | None:
        return None if isinstance(self.backing, FiniteBacking) else self.backing.window


def _equal_on(a: SparseMat, b: SparseMat, bound: int | None) -> tuple[bool, str]:
    """Exact or windowed equality with the first mismatch as evidence."""
    if bound is not None:
        a, b = a.window(bound), b.window(bound)
    if a == b:
        return True, ""
    diff = a - b
    where = min(key for key, _ in diff.items())
    return False, f"first mismatch at {where}"


def derive_projections(graph: DirectedGraph, isometries: dict[str, SparseMat],
                       dim: int) -> tuple[dict[str, SparseMat], dict[str, str]]:
    """Projections from the relations: at a vertex with outgoing edges the
    adjoint-product of its first outgoing edge; otherwise the sum of
    S_e S_e* over incoming edges; zero when the vertex is isolated."""
    projections: dict[str, SparseMat] = {}
    origin: dict[str, str] = {}
    for v in graph.vertices:
        out = [label for src, _, label in graph.edges if src == v]
        if out:
            s = isometries[out[0]]
            projections[v] = s.adjoint() @ s
            origin[v] = f"adjoint-product of outgoing edge {out[0]}"
            continue
        incoming = [label for _, dst, label in graph.edges if dst == v]
        if incoming:
            total = SparseMat.zero(dim, dim)
            for label in incoming:
                s = isometries[label]
                total = total + s @ s.adjoint()
            projections[v] = total
            origin[v] = "sum of range projections over incoming edges"
        else:
            projections[v] = SparseMat.zero(dim, dim)
            origin[v] = "isolated vertex (zero projection)"
    return projections, origin


@dataclass(frozen=True)
class CKReport:
    """Verdicts of verify_ck, keyed by edge label, vertex label, and
    unordered vertex pairs. Vertices without incoming edges are listed in
    relation2_skipped rather than judged."""

    relation1: dict[str, Verdict]
    relation2: dict[str, Verdict]
    relation2_skipped: tuple[str, ...]
    partial_isometry: dict[str, Verdict]
    mutual_orthogonality: dict[tuple[str, str], Verdict]
    convention: dict[str, str]
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "relation1": {k: v.to_json_dict() for k, v in sorted(self.relation1.items())},
            "relation2": {k: v.to_json_dict() for k, v in sorted(self.relation2.items())},
            "relation2_skipped": list(self.relation2_skipped),
            "partial_isometry": {k: v.to_json_dict()
                                 for k, v in sorted(self.partial_isometry.items())},
            "mutual_orthogonality": {f"{a}|{b}": v.to_json_dict()
                                     for (a, b), v in sorted(self.mutual_orthogonality.items())},
            "convention": dict(self.convention),
            "passed": self.passed,
        }


_CONVENTION = {
    "relation1": "S_e* S_e = P_v at the arrow tail v of e",
    "relation2": "P_v = sum of S_e S_e* over edges with arrow head v",
    "relation2_skipped": "vertices with no incoming edges",
}


def verify_ck(family: CKFamily) -> CKReport:
    """Checks the Cuntz-Krieger relations, partial-isometry property, and
    mutual orthogonality of the family's projections. Verdicts are reported
    truthfully; nothing is repaired."""
    graph = family.graph
    bound = family.comparison_bound

    relation1: dict[str, Verdict] = {}
    partial_isometry: dict[str, Verdict] = {}
    for src, _, label in graph.edges:
        s = family.isometries[label]
        equal, why = _equal_on(s.adjoint() @ s, family.projections[src], bound)
        relation1[label] = ok() if equal else fail(f"S*S != P[{src}]: {why}")
        equal, why = _equal_on(s @ s.adjoint() @ s, s, bound)
        partial_isometry[label] = ok() if equal else fail(f"S S* S != S: {why}")

    relation2: dict[str, Verdict] = {}
    skipped: list[str] = []
    dim = family.backing.dim if isinstance(family.backing, FiniteBacking) else family.backing.n
    for v in graph.vertices:
        incoming = [label for _, dst, label in graph.edges if dst == v]
        if not incoming:
            skipped.append(v)
            continue
        total = SparseMat.zero(dim, dim)
        for label in incoming:
            s = family.isometries[label]
            total = total + s @ s.adjoint()
        if family.projection_origin.get(v, "").startswith("sum of range projections"):
            relation2[v] = Verdict(PASS, "defining equation for this projection")
            continue
        equal, why = _equal_on(total, family.projections[v], bound)
        relation2[v] = ok() if equal else fail(f"sum of S S* != P[{v}]: {why}")

    mutual: dict[tuple[str, str], Verdict] = {}
    vertices = graph.vertices
    for a in range(len(vertices)):
        for b in range(a + 1, len(vertices)):
            va, vb = vertices[a], vertices[b]
            product = family.projections[va] @ family.projections[vb]
            if bound is not None:
                product = product.window(bound)
            if product.is_zero():
                mutual[(va, vb)] = ok()
            else:
                where = min(key for key, _ in product.items())
                mutual[(va, vb)] = fail(f"P[{va}] P[{vb}] != 0: entry at {where}")

    all_verdicts = list(relation1.values()) + list(relation2.values()) + \
        list(partial_isometry.values()) + list(mutual.values())
    return CKReport(relation1, relation2, tuple(skipped), partial_isometry,
                    mutual, dict(_CONVENTION), all(v.ok for v in all_verdicts))


# -- family constructors ----------------------------------------------------


def _grid_position(label: str) -> tuple[int, int]:
    """Parse the (row, col) of a canonical grid vertex label."""
    body = label[1:]
    if "." in body:
        r, c = body.split(".", 1)
        return int(r), int(c)
    return int(body[0]), int(body[1])


def _family_from_patterns(graph: DirectedGraph, patterns: dict[str, PatternOperator],
                          n_trunc: int, margin: int | None, name: str,
                          experimental: bool = False) -> CKFamily:
    max_stride = max(max(r.row_stride, r.col_stride)
                     for p in patterns.values() for r in p.rules)
    ratio = max(p.ratio for p in patterns.values())
    if margin is None:
        margin = max_stride
    if n_trunc < max_stride + margin:
        raise ValueError(f"truncation {n_trunc} too small; need >= {max_stride + margin}")
    window = (n_trunc - margin) // ratio
    if window < 1:
        raise ValueError(f"margin {margin} leaves an empty comparison window")
    isometries = {label: p.truncate(n_trunc) for label, p in patterns.items()}
    projections, origin = derive_projections(graph, isometries, n_trunc)
    return CKFamily(graph, isometries, projections,
                    TruncatedBacking(n_trunc, margin, window),
                    projection_origin=origin, name=name, experimental=experimental)


def family_Pi2_infinite(n_trunc: int = 600, margin: int | None = None) -> CKFamily:
    """The six-operator family over the relation graph at n = 2, acting on
    the N x N corner of l2(N). Row-major vertex order is x11, x12, x21, x22;
    the edge e{a}_{b} runs from vertex a to vertex b."""
    graph = build_relation_graph(2)
    patterns = {
        "e1_2": PatternOperator((AffineRule(6, 0, 3, -2),)),   # x11 -> x12
        "e1_3": PatternOperator((AffineRule(6, -4, 3, -2),)),  # x11 -> x21
        "e2_4": PatternOperator((AffineRule(6, -3, 3, 0),)),   # x12 -> x22
        "e3_4": PatternOperator((AffineRule(6, -4, 3, -1),)),  # x21 -> x22
        "e2_3": PatternOperator((AffineRule(6, -1, 3, 0),)),   # x12 -> x21
        "e3_2": PatternOperator((AffineRule(6, -3, 3, -1),)),  # x21 -> x12
    }
    return _family_from_patterns(graph, patterns, n_trunc, margin,
                                 name="relation-graph n=2, truncated corner family")


def _pi_n_finite_assignment(n: int) -> tuple[dict[tuple[int, int], int], dict[tuple[int, int], int]]:
    """Hub indices for the finite involution-graph family.

    Loops at x_ii take index i+1; cross pairs (i < j) take the next free
    index for the forward edge and then for the backward edge. There is one
    more edge than free indices, so the final backward edge reuses its
    forward partner's index (at n = 2 this reproduces the published
    four-operator family exactly).
    """
    dim = n * n
    forward: dict[tuple[int, int], int] = {}
    backward: dict[tuple[int, int], int] = {}
    nxt = 2 + n  # loops consume 2..n+1
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if nxt <= dim:
                forward[(i, j)] = nxt
                nxt += 1
            else:
                forward[(i, j)] = dim
            if nxt <= dim:
                backward[(i, j)] = nxt
                nxt += 1
            else:
                backward[(i, j)] = forward[(i, j)]
    return forward, backward


def family_pi_n_finite(n: int) -> CKFamily:
    """Finite family over the involution graph inside the n^2 x n^2 matrix
    algebra: every operator is a matrix unit through the hub index 1, with
    loops at x_ii mapped to E_{i+1,1}. The hub makes the generated algebra
    all of M_{n^2} at the cost of overlapping (non-orthogonal) projections,
    which verify_ck reports."""
    if n < 2:
        raise ValueError("n must be >= 2")
    dim = n * n
    graph = build_pi_graph(n)
    forward, backward = _pi_n_finite_assignment(n)
    isometries: dict[str, SparseMat] = {}
    for src, dst, label in graph.edges:
        r, c = _grid_position(src)
        if r == c:
            isometries[label] = SparseMat.unit(dim, r + 1, 1)
        elif r < c:
            isometries[label] = SparseMat.unit(dim, forward[(r, c)], 1)
        else:
            isometries[label] = SparseMat.unit(dim, 1, backward[(c, r)])
    projections, origin = derive_projections(graph, isometries, dim)
    return CKFamily(graph, isometries, projections, FiniteBacking(dim),
                    projection_origin=origin,
                    name=f"involution graph n={n}, hub matrix-unit family")


def family_pi2_finite() -> CKFamily:
    """The published four-operator family in M_4 over the involution graph
    at n = 2, together with the literally stated projections (which the
    derived ones reproduce)."""
    base = family_pi_n_finite(2)
    literal = {
        "x11": SparseMat.unit(4, 1, 1),
        "x12": SparseMat.unit(4, 1, 1),
        "x22": SparseMat.unit(4, 1, 1),
        "x21": SparseMat.unit(4, 4, 4),
    }
    return CKFamily(base.graph, base.isometries, base.projections, base.backing,
                    projection_origin=base.projection_origin,
                    literal_projections=literal,
                    name="involution graph n=2, published matrix-unit family")


def family_pi_n_infinite(n: int, n_trunc: int = 600, margin: int | None = None) -> CKFamily:
    """Infinite family over the involution graph: every loop is the
    unilateral shift and every cross pair is the index-doubling isometry and
    its adjoint, truncated to an N x N corner."""
    if n < 2:
        raise ValueError("n must be >= 2")
    graph = build_pi_graph(n)
    shift = PatternOperator((AffineRule(1, 1, 1, 0),))
    double = PatternOperator((AffineRule(2, 0, 1, 0),))
    halve = PatternOperator((AffineRule(1, 0, 2, 0),))
    patterns: dict[str, PatternOperator] = {}
    for src, dst, label in graph.edges:
        r, c = _grid_position(src)
        if r == c:
            patterns[label] = shift
        elif r < c:
            patterns[label] = double
        else:
            patterns[label] = halve
    return _family_from_patterns(graph, patterns, n_trunc, margin,
                                 name=f"involution graph n={n}, truncated corner family")


def family_pi2_infinite(n_trunc: int = 600, margin: int | None = None) -> CKFamily:
    """The n = 2 instance of the infinite involution-graph family."""
    return family_pi_n_infinite(2, n_trunc, margin)


@dataclass(frozen=True)
class ClaimParams:
    """Offsets for one experimental pattern S = sum_j E_{E*j - A, (d-1)*j - D}
    with d = n^2 and E = exit_degree(tail) * (d - 1)."""

    offset_a: int
    offset_d: int


def family_Pi_n_claim(n: int, params: ClaimParams | dict[str, ClaimParams],
                      n_trunc: int = 600, margin: int | None = None) -> CKFamily:
    """Experimental family over the relation graph built from the offset
    template. `params` applies to every edge, or per-edge via a label map.
    The verdict of verify_ck on these families is reported, never assumed."""
    if n < 2:
        raise ValueError("n must be >= 2")
    graph = build_relation_graph(n)
    d = n * n
    col_stride = d - 1
    patterns: dict[str, PatternOperator] = {}
    for src, _, label in graph.edges:
        p = params[label] if isinstance(params, dict) else params
        scale = exit_degree(graph, src) * col_stride
        if not (0 <= p.offset_d <= d - 2):
            raise ValueError(f"offset D={p.offset_d} out of range 0..{d - 2}")
        if not (0 <= p.offset_a <= scale):
            raise ValueError(f"offset A={p.offset_a} out of range 0..{scale}")
        patterns[label] = PatternOperator((AffineRule(scale, -p.offset_a,
                                                      col_stride, -p.offset_d),))
    return _family_from_patterns(graph, patterns, n_trunc, margin,
                                 name=f"relation graph n={n}, experimental offset family",
                                 experimental=True)


def claim_params_matching_published(n: int = 2) -> dict[str, ClaimParams]:
    """The per-edge offsets that reproduce the published six-operator family
    at n = 2 (only defined there)."""
    if n != 2:
        raise ValueError("published offsets are only known for n = 2")
    return {
        "e1_2": ClaimParams(0, 2),
        "e1_3": ClaimParams(4, 2),
        "e2_4": ClaimParams(3, 0),
        "e3_4": ClaimParams(4, 1),
        "e2_3": ClaimParams(1, 0),
        "e3_2": ClaimParams(3, 1),
    }


# -- free-standing relation checks ------------------------------------------


@dataclass(frozen=True)
class CuntzReport:
    """Verdicts for the Cuntz relations S_i* S_i = 1 and sum S_i S_i* = 1."""

    isometry: tuple[Verdict, ...]
    completeness: Verdict
    degenerate: bool
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "isometry": [v.to_json_dict() for v in self.isometry],
            "completeness": self.completeness.to_json_dict(),
            "degenerate": self.degenerate,
            "passed": self.passed,
        }


def verify_cuntz(operators: list[SparseMat], window: int | None = None) -> CuntzReport:
    """Checks the Cuntz relations on a list of operators of one dimension.
    Families with fewer than two operators are flagged degenerate."""
    if not operators:
        raise ValueError("need at least one operator")
    dim = operators[0].rows
    for op in operators:
        if not op.is_square() or op.rows != dim:
            raise ValueError("operators must be square and of equal dimension")
    ident = SparseMat.identity(dim)
    isometry = []
    for idx, op in enumerate(operators):
        equal, why = _equal_on(op.adjoint() @ op, ident, window)
        isometry.append(ok() if equal else fail(f"S_{idx + 1}* S_{idx + 1} != 1: {why}"))
    total = SparseMat.zero(dim, dim)
    for op in operators:
        total = total + op @ op.adjoint()
    equal, why = _equal_on(total, ident, window)
    completeness = ok() if equal else fail(f"sum of S S* != 1: {why}")
    verdicts = isometry + [completeness]
    return CuntzReport(tuple(isometry), completeness, len(operators) < 2,
                       all(v.ok for v in verdicts))


@dataclass(frozen=True)
class CKMatrixReport:
    """Per-row verdicts for S_i* S_i = sum_j a_ij S_j S_j*."""

    rows: tuple[Verdict, ...]
    degenerate: bool
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "rows": [v.to_json_dict() for v in self.rows],
            "degenerate": self.degenerate,
            "passed": self.passed,
        }


def verify_ck_matrix(operators: list[SparseMat], a: SparseMat,
                     window: int | None = None) -> CKMatrixReport:
    """Checks the matrix form of the Cuntz-Krieger relations against a 0/1
    coefficient matrix with one row per operator. The all-zero situation is
    a degenerate pass and flagged as such."""
    if not a.is_square() or a.rows != len(operators):
        raise ValueError("coefficient matrix must be square with one row per operator")
    for _, v in a.items():
        if v != ONE:
            raise ValueError("coefficient matrix must be 0/1")
    if not operators:
        raise ValueError("need at least one operator")
    dim = operators[0].rows
    for op in operators:
        if not op.is_square() or op.rows != dim:
            raise ValueError("operators must be square and of equal dimension")
    range_projections = [op @ op.adjoint() for op in operators]
    rows = []
    for i, op in enumerate(operators, start=1):
        total = SparseMat.zero(dim, dim)
        for j in range(1, len(operators) + 1):
            if a.entry(i, j) == ONE:
                total = total + range_projections[j - 1]
        equal, why = _equal_on(op.adjoint() @ op, total, window)
        rows.append(ok() if equal else fail(f"row {i}: S*S != sum a_ij S_j S_j*: {why}"))
    degenerate = a.is_zero() or all(op.is_zero() for op in operators)
    return CKMatrixReport(tuple(rows), degenerate, all(v.ok for v in rows))


def generated_dimension(family: CKFamily) -> tuple[int, bool]:
    """Linear dimension of the algebra generated by the family's operators
    and projections (adjoints included), and whether it is the full matrix
    algebra. Only meaningful for finite backings."""
    if not isinstance(family.backing, FiniteBacking):
        raise ValueError("generated_dimension requires a finite backing")
    generators = list(family.isometries.values()) + list(family.projections.values())
    _, dimension, closed = span_closure(generators, include_adjoints=True)
    if not closed:
        raise RuntimeError("span closure did not stabilize within the pass budget")
    full = dimension == family.backing.dim ** 2
    return dimension, full
