"""Acceptance gate: twelve end-to-end criteria, one test and one printed
pass line each. Time limits are asserted with monotonic clocks; exactness
means Scalar/SparseMat equality, never floating-point closeness."""

import json
import time

import pytest

import oracles
from graphck.cli import main
from graphck.cuntz_krieger import (family_Pi2_infinite, family_pi2_finite,
                                   family_pi_n_finite, generated_dimension,
                                   verify_ck)
from graphck.exact_linalg import ONE, SparseMat, kron, matrix_unit
from graphck.hopf_verify import (FunctionAlgebra, check_T1_T2, check_axioms,
                                 coassociativity_at_points, discrete_qg_check,
                                 find_cointegral, fundamental_matrix,
                                 involution_of, literal_delta,
                                 magic_element_report, std_model,
                                 structure_constants_of,
                                 symmetric_group_algebra, artin_wedderburn)
from graphck.magic_unitary import commuting_magic_unitaries, pi_n
from graphck.quantum_graph import (adjacency_matrix, build_pi_graph,
                                   build_relation_graph, edge_matrix,
                                   line_graph)


@pytest.fixture
def announce(capsys):
    def _announce(number: int, message: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: PASS - {message}")
    return _announce


def test_acceptance_01_edge_count_formula(announce):
    start = time.monotonic()
    for n in (2, 3, 4, 5, 6):
        graph = build_relation_graph(n)
        # independent enumeration over vertex quadruples: rows and columns
        # contribute one edge per unordered pair, antidiagonal positions one
        # edge per ordered pair
        row_col = sum(
            1
            for i in range(1, n + 1) for j in range(1, n + 1)
            for k in range(1, n + 1) for l in range(1, n + 1)
            if (i, j) != (k, l) and ((i == k and j < l) or (j == l and i < k))
        )
        anti = sum(
            1
            for i in range(1, n + 1) for j in range(1, n + 1)
            for k in range(1, n + 1) for l in range(1, n + 1)
            if i != k and j != l and ((i < k) != (j < l))
        )
        independent = row_col + anti
        assert graph.edge_count == independent
        assert graph.edge_count == (n ** 3 + n ** 2) * (n - 1) // 2
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    announce(1, f"edge counts match (n^3+n^2)(n-1)/2 for n=2..6 in {elapsed:.2f}s")


def test_acceptance_02_published_pictures(announce):
    relation = build_relation_graph(2)
    assert relation.to_json_dict() == {
        "n": 2,
        "vertices": ["x11", "x12", "x21", "x22"],
        "edges": [
            ["x11", "x12", "e1_2"], ["x11", "x21", "e1_3"],
            ["x12", "x22", "e2_4"], ["x21", "x22", "e3_4"],
            ["x12", "x21", "e2_3"], ["x21", "x12", "e3_2"],
        ],
    }
    pi = build_pi_graph(2)
    assert pi.to_json_dict() == {
        "n": 2,
        "vertices": ["x11", "x12", "x21", "x22"],
        "edges": [
            ["x11", "x11", "e1_1"], ["x12", "x21", "e2_3"],
            ["x21", "x12", "e3_2"], ["x22", "x22", "e4_4"],
        ],
    }
    displayed = SparseMat(4, 4, {(1, 1): ONE, (2, 3): ONE, (3, 2): ONE,
                                 (4, 4): ONE})
    assert adjacency_matrix(pi) == displayed
    assert pi_n(2).to_sparse() == displayed
    announce(2, "n=2 graphs and the displayed involution matrix match exactly")


def test_acceptance_03_commutant(announce):
    a2 = adjacency_matrix(build_relation_graph(2))
    result = commuting_magic_unitaries(a2)
    brute = oracles.commutant_by_brute_force(oracles.from_sparse(a2))
    assert [p.perm for p in result.perms] == sorted(brute)
    assert len(brute) == 2
    assert result.is_identity_and(pi_n(2))

    start = time.monotonic()
    result3 = commuting_magic_unitaries(adjacency_matrix(build_relation_graph(3)))
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    assert result3.contains(pi_n(3))
    assert result3.count == 2
    announce(3, f"commutants are {{identity, involution}}; n=3 search {elapsed:.2f}s")


def test_acceptance_04_window_identities(announce):
    family = family_Pi2_infinite(n_trunc=600, margin=12)
    w = family.backing.window
    n_big = 600
    diag_1mod3 = SparseMat(n_big, n_big, {(3 * k - 2, 3 * k - 2): ONE
                                          for k in range(1, n_big // 3 + 1)})
    diag_0mod3 = SparseMat(n_big, n_big, {(3 * k, 3 * k): ONE
                                          for k in range(1, n_big // 3 + 1)})
    diag_2mod3 = SparseMat(n_big, n_big, {(3 * k - 1, 3 * k - 1): ONE
                                          for k in range(1, n_big // 3 + 1)})
    expected_by_edge = {
        "e1_2": diag_1mod3, "e1_3": diag_1mod3,
        "e2_4": diag_0mod3, "e2_3": diag_0mod3,
        "e3_4": diag_2mod3, "e3_2": diag_2mod3,
    }
    for label, expected in expected_by_edge.items():
        s = family.isometries[label]
        assert (s.adjoint() @ s).window(w) == expected.window(w), label

    verdicts_600 = {pair: v.status
                    for pair, v in verify_ck(family).mutual_orthogonality.items()}
    failing = {pair for pair, status in verdicts_600.items() if status == "fail"}
    assert failing == {("x12", "x22"), ("x21", "x22")}

    family_1200 = family_Pi2_infinite(n_trunc=1200, margin=12)
    verdicts_1200 = {pair: v.status
                     for pair, v in verify_ck(family_1200).mutual_orthogonality.items()}
    assert verdicts_1200 == verdicts_600
    announce(4, "six window identities hold at N=600; orthogonality verdict "
                "stable at N=1200")


def test_acceptance_05_finite_family_products_and_closure(announce, capsys):
    family = family_pi2_finite()
    e11 = matrix_unit(4, 1, 1)
    e44 = matrix_unit(4, 4, 4)
    products = {label: op.adjoint() @ op for label, op in family.isometries.items()}
    assert products == {"e1_1": e11, "e2_3": e11, "e3_2": e44, "e4_4": e11}
    assert family.projections["x11"] == family.projections["x12"] == e11

    start = time.monotonic()
    assert generated_dimension(family) == (16, True)
    assert generated_dimension(family_pi_n_finite(3)) == (81, True)
    elapsed = time.monotonic() - start
    assert elapsed < 30.0

    report = verify_ck(family)
    assert report.mutual_orthogonality[("x11", "x12")].status == "fail"
    code = main(["ck", "verify", "--family", "pi2-finite"])
    capsys.readouterr()
    assert code == 2
    announce(5, f"relation products are E11/E44; closures (16, full) and "
                f"(81, full) in {elapsed:.2f}s; refutation exits 2")


def test_acceptance_06_edge_matrix_is_line_graph_adjacency(announce):
    for build in (build_relation_graph, build_pi_graph):
        for n in (1, 2, 3, 4):
            g = build(n)
            assert edge_matrix(g) == adjacency_matrix(line_graph(g)), (build, n)
    announce(6, "edge matrix equals line-graph adjacency for both families, n<=4")


def test_acceptance_07_axiom_suite(announce):
    for d in (2, 3):
        algebra, candidate = std_model(d)
        report = check_axioms(candidate)
        assert report.passed, d
        assert "all basis" in report.coassociativity.detail  # exhaustive sweep
        assert magic_element_report(fundamental_matrix(algebra), algebra).passed

    _, candidate3 = std_model(3)
    checked, failures = coassociativity_at_points(candidate3)
    assert checked == 216 * 6 and failures == []

    _, candidate4 = std_model(4)
    checked, failures = coassociativity_at_points(candidate4, samples=100_000)
    assert checked == 100_000 and failures == []
    announce(7, "axiom suite exhaustive at d=2,3; 100000 sampled triples at "
                "d=4 with zero failures")


def test_acceptance_08_cointegral(announce):
    algebra, candidate = std_model(3)
    report = find_cointegral(candidate)
    assert report.solutions == ({algebra.identity_index: ONE},)
    assert all(v.ok for v in report.right_sided)
    assert all(v.ok for v in report.absorption)
    h = report.solutions[0]
    for g in range(algebra.dim):
        product = algebra.mul(algebra.basis_vec(g), h)
        scaled = {k: candidate.counit[g] * v for k, v in h.items()
                  if candidate.counit[g] * v}
        assert product == scaled, algebra.labels[g]
    announce(8, "cointegral is the span of the identity point mass; absorption "
                "holds on all 6 basis elements")


def test_acceptance_09_galois_map_ranks(announce):
    _, candidate3 = std_model(3)
    report3 = check_T1_T2(candidate3)
    assert (report3.t1_rank, report3.t2_rank, report3.dim_squared) == (36, 36, 36)
    assert report3.passed

    _, candidate4 = std_model(4)
    report4 = check_T1_T2(candidate4)
    assert (report4.t1_rank, report4.t2_rank, report4.dim_squared) == (576, 576, 576)
    assert report4.passed
    announce(9, "T1/T2 ranks 36/36 (d=3) and 576/576 (d=4), bijective")


def test_acceptance_10_wedderburn_and_hypothesis_bundle(announce):
    g = symmetric_group_algebra(3)
    blocks = artin_wedderburn(structure_constants_of(g), involution_of(g),
                              tolerance=1e-9, seed=0)
    assert blocks == (1, 1, 2)
    assert sum(b * b for b in blocks) == 6
    again = artin_wedderburn(structure_constants_of(g), involution_of(g),
                             tolerance=1e-9, seed=0)
    assert again == blocks

    fn = FunctionAlgebra(3)
    assert artin_wedderburn(structure_constants_of(fn)) == (1, 1, 1, 1, 1, 1)

    _, candidate = std_model(3)
    assert discrete_qg_check(candidate).passed
    announce(10, "group algebra blocks (1,1,2), function algebra six lines, "
                 "hypothesis bundle passes at d=3")


def test_acceptance_11_index_splitting_roundtrip(announce, capsys):
    for n in (2, 3):
        candidate = literal_delta(n)
        source = candidate.source
        target = candidate.target_factor
        seen = set()
        for idx in range(source.dim):
            ((first, second),) = candidate.images[idx].keys()
            assert (first, second) not in seen  # injective on basis
            seen.add((first, second))
            k, h = target.unit_position(first)
            o, r = target.unit_position(second)
            l, m = source.unit_position(idx)
            assert kron(matrix_unit(n, o, r), matrix_unit(n, k, h)) == \
                matrix_unit(n * n, l, m)
        assert len(seen) == source.dim  # bijection onto the product basis

    report = check_axioms(literal_delta(2))
    assert report.coassociativity.status == "not-applicable"
    assert "16" in report.coassociativity.detail
    assert "256" in report.coassociativity.detail
    assert check_axioms(literal_delta(2)) == report  # stable
    code = main(["hopf", "check", "--model", "literal", "--n", "2"])
    capsys.readouterr()
    assert code == 2
    announce(11, "round-trip bijection on 16 and 81 basis elements; dimension "
                 "obstruction recorded and exits 2")


def test_acceptance_12_cli_determinism(announce, capsys, tmp_path):
    invocations = [
        ["graph", "build", "--family", "relation", "--n", "3"],
        ["graph", "build", "--family", "pi", "--n", "2", "-f", "dot"],
        ["magic", "commutant", "--family", "relation", "--n", "2"],
        ["ck", "verify", "--family", "pi2-finite"],
        ["ck", "verify", "--family", "Pi2-inf", "-N", "60"],
        ["hopf", "check", "--model", "sd", "--d", "3"],
        ["hopf", "cointegral", "--d", "3"],
        ["hopf", "aw", "--algebra", "sd-group", "--size", "4"],
        ["hopf", "dqg", "--d", "2"],
    ]
    for argv in invocations:
        code1 = main(list(argv))
        out1 = capsys.readouterr().out
        code2 = main(list(argv))
        out2 = capsys.readouterr().out
        assert (code1, out1) == (code2, out2), argv
        if "-f" not in argv:
            json.loads(out1)  # every non-dot payload is well-formed JSON

    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["report", "--out", str(out_a), "-N", "60"]) == 0
    capsys.readouterr()
    assert main(["report", "--out", str(out_b), "-N", "60"]) == 0
    capsys.readouterr()
    for name in ("summary.csv", "summary.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    figures = sorted((out_a / "figures").glob("*.png"))
    assert figures
    for fig in figures:
        assert fig.read_bytes() == (out_b / "figures" / fig.name).read_bytes()
    announce(12, "repeated CLI invocations and report artifacts are "
                 "byte-identical")
