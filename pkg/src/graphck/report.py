"""Battery runner: executes the library's verification suite with a fixed
expectation per check, writes a delimited summary (CSV), a full JSON
payload, and matplotlib figures of the small graphs and adjacency
matrices. Several published claims are expected to be refuted; a check
counts as a surprise only when its verdict differs from the recorded
expectation, so exit codes stay meaningful in automation.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import cuntz_krieger as ck
from . import hopf_verify as hopf
from .magic_unitary import commuting_magic_unitaries, pi_n
from .quantum_graph import (DirectedGraph, adjacency_matrix, build_pi_graph,
                            build_relation_graph, edge_matrix, line_graph)

PNG_METADATA = {"Software": "graphck"}


@dataclass(frozen=True)
class CheckRow:
    check: str
    construction: str
    expected: str
    observed: str
    detail: str

    @property
    def matches(self) -> bool:
        return self.expected == self.observed


@dataclass(frozen=True)
class ReportOutcome:
    total: int
    as_expected: int
    surprises: list[str]
    files: list[str]


def _verdict(flag: bool) -> str:
    return "pass" if flag else "fail"


def _relation_edge_count(n: int) -> int:
    return (n ** 3 + n ** 2) * (n - 1) // 2


def _collect_rows(truncation_n: int, margin: int | None, seed: int,
                  tolerance: float) -> list[CheckRow]:
    rows: list[CheckRow] = []

    for n in (2, 3, 4):
        graph = build_relation_graph(n)
        want = _relation_edge_count(n)
        rows.append(CheckRow(
            f"relation-graph-edge-count-n{n}",
            f"relation graph on the {n} x {n} grid",
            "pass", _verdict(len(graph.edges) == want),
            f"{len(graph.edges)} edges, formula gives {want}"))

    for n in (2, 3):
        graph = build_pi_graph(n)
        same = adjacency_matrix(graph) == pi_n(n).to_sparse()
        rows.append(CheckRow(
            f"pi-graph-adjacency-n{n}",
            f"grid-transpose graph on the {n} x {n} grid",
            "pass", _verdict(same),
            "adjacency equals the involution's permutation matrix"))

    for family, n in (("relation", 2), ("relation", 3), ("pi", 2)):
        graph = build_relation_graph(n) if family == "relation" else build_pi_graph(n)
        same = edge_matrix(graph) == adjacency_matrix(line_graph(graph))
        rows.append(CheckRow(
            f"edge-matrix-identity-{family}-n{n}",
            f"{family} graph on the {n} x {n} grid",
            "pass", _verdict(same),
            "edge matrix equals the line graph's adjacency matrix"))

    result = commuting_magic_unitaries(adjacency_matrix(build_relation_graph(2)))
    rows.append(CheckRow(
        "commutant-relation-n2",
        "permutations commuting with the relation graph adjacency, n=2",
        "pass", _verdict(result.is_identity_and(pi_n(2))),
        f"count {result.count}, overflow {result.overflow}"))

    big = ck.family_Pi2_infinite(truncation_n, margin)
    report = ck.verify_ck(big)
    rows.append(CheckRow(
        "ck-relation1-six-edge-family",
        big.name, "pass",
        _verdict(all(v.ok for v in report.relation1.values())),
        "first relation holds on the comparison window for all six edges"))
    rows.append(CheckRow(
        "ck-full-verdict-six-edge-family",
        big.name, "fail", _verdict(report.passed),
        "two derived projections overlap, so mutual orthogonality is refuted"))

    finite = ck.family_pi2_finite()
    report = ck.verify_ck(finite)
    rows.append(CheckRow(
        "ck-relation1-grid-family-n2",
        finite.name, "pass",
        _verdict(all(v.ok for v in report.relation1.values())),
        "first relation holds exactly for all four edges"))
    rows.append(CheckRow(
        "ck-full-verdict-grid-family-n2",
        finite.name, "fail", _verdict(report.passed),
        "range-sum relation fails at the loops; projections coincide"))

    dimension, full = ck.generated_dimension(finite)
    rows.append(CheckRow(
        "ck-closure-grid-family-n2",
        finite.name, "pass", _verdict((dimension, full) == (16, True)),
        f"generated dimension {dimension}, full {full}"))

    for d in (2, 3):
        algebra, candidate = hopf.std_model(d)
        axioms = hopf.check_axioms(candidate, seed=seed)
        magic = hopf.magic_element_report(hopf.fundamental_matrix(algebra), algebra)
        rows.append(CheckRow(
            f"hopf-axioms-sd-d{d}",
            candidate.name, "pass", _verdict(axioms.passed and magic.passed),
            "all ten axiom verdicts plus the pointwise magic relations"))

    literal = hopf.literal_delta(2)
    axioms = hopf.check_axioms(literal, seed=seed)
    rows.append(CheckRow(
        "hopf-homomorphism-literal-n2",
        literal.name, "pass", _verdict(axioms.delta_homomorphism.ok),
        "the index-splitting map is multiplicative on all basis pairs"))
    rows.append(CheckRow(
        "hopf-axioms-literal-n2",
        literal.name, "fail", _verdict(axioms.passed),
        axioms.coassociativity.detail or "tensor-square axioms not applicable"))

    _, candidate3 = hopf.std_model(3)
    coint = hopf.find_cointegral(candidate3)
    good = (len(coint.solutions) == 1 and all(v.ok for v in coint.right_sided)
            and all(v.ok for v in coint.absorption))
    rows.append(CheckRow(
        "hopf-cointegral-sd-d3",
        candidate3.name, "pass", _verdict(good),
        f"{len(coint.solutions)} solution(s); right-sided and absorption laws checked"))

    for name, algebra, want in (
            ("group-s3", hopf.symmetric_group_algebra(3), (1, 1, 2)),
            ("functions-s3", hopf.FunctionAlgebra(3), (1, 1, 1, 1, 1, 1)),
            ("cyclic-4", hopf.cyclic_group_algebra(4), (1, 1, 1, 1))):
        blocks = hopf.artin_wedderburn(hopf.structure_constants_of(algebra),
                                       hopf.involution_of(algebra),
                                       tolerance, seed)
        rows.append(CheckRow(
            f"wedderburn-{name}", algebra.name, "pass",
            _verdict(blocks == want),
            f"blocks {list(blocks)}, expected {list(want)}"))

    dqg = hopf.discrete_qg_check(candidate3, tolerance=tolerance, seed=seed)
    rows.append(CheckRow(
        "discrete-qg-sd-d3", candidate3.name, "pass", _verdict(dqg.passed),
        f"blocks {list(dqg.block_sizes)}"))

    return rows


# -- figures -------------------------------------------------------------------


def _circle_layout(labels) -> dict[str, tuple[float, float]]:
    count = len(labels)
    return {label: (math.cos(2 * math.pi * k / count - math.pi / 2),
                    math.sin(2 * math.pi * k / count - math.pi / 2))
            for k, label in enumerate(labels)}


def _draw_graph(graph: DirectedGraph, title: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    pos = _circle_layout(graph.vertices)
    for src, dst, _ in graph.edges:
        x1, y1 = pos[src]
        if src == dst:
            ax.annotate("", xy=(x1 + 0.06, y1 + 0.22), xytext=(x1 - 0.06, y1 + 0.22),
                        arrowprops=dict(arrowstyle="-|>", color="tab:blue",
                                        connectionstyle="arc3,rad=2.2"))
            continue
        x2, y2 = pos[dst]
        ax.annotate("", xy=(x2, y2), xytext=(x1, y1),
                    arrowprops=dict(arrowstyle="-|>", color="tab:blue",
                                    connectionstyle="arc3,rad=0.12",
                                    shrinkA=14, shrinkB=14))
    for label, (x, y) in pos.items():
        ax.scatter([x], [y], s=520, color="white", edgecolor="black", zorder=3)
        ax.text(x, y, label, ha="center", va="center", fontsize=9, zorder=4)
    ax.set_title(title)
    ax.set_xlim(-1.55, 1.55)
    ax.set_ylim(-1.55, 1.55)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=150, metadata=PNG_METADATA)
    plt.close(fig)


def _draw_adjacency(path: Path) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(7.2, 3.6))
    for ax, (graph, title) in zip(axes, (
            (build_relation_graph(2), "relation graph, n=2"),
            (build_pi_graph(2), "grid-transpose graph, n=2"))):
        mat = adjacency_matrix(graph)
        dense = [[1 if mat.entry(i, j) else 0 for j in range(1, mat.cols + 1)]
                 for i in range(1, mat.rows + 1)]
        ax.imshow(dense, cmap="Greys", vmin=0, vmax=1)
        ax.set_title(title, fontsize=10)
        ax.set_xticks(range(mat.cols), graph.vertices, fontsize=8)
        ax.set_yticks(range(mat.rows), graph.vertices, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=PNG_METADATA)
    plt.close(fig)


def _write_figures(outdir: Path) -> list[str]:
    figures = outdir / "figures"
    figures.mkdir(parents=True, exist_ok=True)
    _draw_graph(build_relation_graph(2), "relation graph, n=2",
                figures / "relation_graph_n2.png")
    _draw_graph(build_pi_graph(2), "grid-transpose graph, n=2",
                figures / "pi_graph_n2.png")
    _draw_adjacency(figures / "adjacency_n2.png")
    return ["figures/adjacency_n2.png", "figures/pi_graph_n2.png",
            "figures/relation_graph_n2.png"]


def run_report(outdir: str, truncation_n: int = 600, margin: int | None = None,
               seed: int = 0, tolerance: float = 1e-9) -> ReportOutcome:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rows = _collect_rows(truncation_n, margin, seed, tolerance)

    csv_path = out / "summary.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["check", "construction", "expected", "observed",
                         "matches_expected", "detail"])
        for row in rows:
            writer.writerow([row.check, row.construction, row.expected,
                             row.observed, str(row.matches).lower(), row.detail])

    json_path = out / "summary.json"
    payload = {
        "schema": 1,
        "seed": seed,
        "tolerance": tolerance,
        "truncation_n": truncation_n,
        "margin": margin,
        "rows": [{
            "check": row.check,
            "construction": row.construction,
            "expected": row.expected,
            "observed": row.observed,
            "matches_expected": row.matches,
            "detail": row.detail,
        } for row in rows],
    }
    json_path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                         encoding="utf-8")

    files = ["summary.csv", "summary.json"] + _write_figures(out)
    surprises = [row.check for row in rows if not row.matches]
    return ReportOutcome(len(rows), sum(1 for r in rows if r.matches),
                         surprises, sorted(files))
