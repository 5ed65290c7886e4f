"""Command-line entry point.

Subcommands: graph (constructions), magic (commutant search and the grid
involution), ck (family building, verification, span closure), hopf (axiom
suites, cointegrals, Wedderburn blocks, the full hypothesis bundle), and
report (battery run with CSV/JSON/figure output).

Exit codes: 0 when a verification passes or a construction succeeds, 2 when
a verification ran and refuted its claim (the report is still emitted), 1
for usage or configuration errors.

Identical argv and config yield byte-identical output: randomness is
seeded, every mapping is emitted in sorted order, and floats never enter
the payloads.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace

from . import cuntz_krieger as ck
from . import hopf_verify as hopf
from .exact_linalg import SparseMat
from .magic_unitary import (BlockMagicUnitary, commuting_magic_unitaries, pi_n,
                            verify_magic)
from .quantum_graph import (adjacency_matrix, build_pi_graph, build_relation_graph,
                            to_dot)

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_REFUTED = 2

SCHEMA_VERSION = 1

CK_FAMILIES = ("pi2-finite", "pi2-inf", "Pi2-inf", "pin-finite", "pin-inf", "claim")


class UsageError(Exception):
    """Bad flags or config; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    truncation_N: int = 600
    margin: int | None = None
    seed: int = 0
    tolerance: float = 1e-9
    output_format: str = "json"

    def validate(self) -> None:
        if self.truncation_N < 1:
            raise UsageError("truncation_N must be >= 1")
        if self.margin is not None and self.margin < 0:
            raise UsageError("margin must be >= 0")
        if self.tolerance <= 0:
            raise UsageError("tolerance must be > 0")
        if self.output_format not in ("json", "dot", "text"):
            raise UsageError("output_format must be json, dot, or text")


_CONFIG_FIELDS = {f.name for f in fields(RunConfig)}


def load_config_file(path: str) -> dict:
    """Flat key=value lines; '#' comments and blank lines ignored."""
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_FIELDS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            if key in ("truncation_N", "seed"):
                values[key] = int(value)
            elif key == "margin":
                values[key] = None if value == "auto" else int(value)
            elif key == "tolerance":
                values[key] = float(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file, then explicit flags."""
    config = RunConfig()
    path = getattr(args, "config", None)
    if path:
        config = replace(config, **load_config_file(path))
    overrides = {}
    for flag, field_name in (("truncation_n", "truncation_N"), ("margin", "margin"),
                             ("seed", "seed"), ("tol", "tolerance"),
                             ("format", "output_format")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field_name] = value
    if overrides:
        config = replace(config, **overrides)
    config.validate()
    return config


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the exit-code contract
    reserves 2 for refuted verifications, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _text_lines(value, prefix: str = "") -> list[str]:
    if isinstance(value, dict):
        lines = []
        for key in sorted(value, key=str):
            lines.extend(_text_lines(value[key], f"{prefix}{key}."))
        return lines
    if isinstance(value, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return [f"{prefix.rstrip('.')} = {' '.join(str(v) for v in value)}"]
        lines = []
        for idx, item in enumerate(value):
            lines.extend(_text_lines(item, f"{prefix}{idx}."))
        return lines
    return [f"{prefix.rstrip('.')} = {value}"]


def _emit(payload: dict, config: RunConfig) -> None:
    if config.output_format == "text":
        sys.stdout.write("\n".join(_text_lines(payload)) + "\n")
    else:
        sys.stdout.write(_json_text(payload))


def _sparse_payload(m: SparseMat) -> dict:
    return m.to_json_dict()


# -- graph ---------------------------------------------------------------------


def _build_graph(family: str, n: int):
    if family == "relation":
        return build_relation_graph(n)
    if family == "pi":
        return build_pi_graph(n)
    raise UsageError(f"unknown graph family {family!r}")


def cmd_graph_build(args, config: RunConfig) -> int:
    graph = _build_graph(args.family, args.n)
    if config.output_format == "dot":
        sys.stdout.write(to_dot(graph))
        return EXIT_PASS
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "graph build",
        "construction": f"{args.family} graph on the {args.n} x {args.n} grid",
        "graph": graph.to_json_dict(),
        "adjacency": _sparse_payload(adjacency_matrix(graph)),
    }
    _emit(payload, config)
    return EXIT_PASS


# -- magic ----------------------------------------------------------------------


def cmd_magic_commutant(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    graph = _build_graph(args.family, args.n)
    result = commuting_magic_unitaries(adjacency_matrix(graph), limit=args.limit)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "magic commutant",
        "construction": (f"permutation matrices commuting with the adjacency "
                         f"matrix of the {args.family} graph, n={args.n}"),
        "count": result.count,
        "overflow": result.overflow,
        "perms": [list(p.perm) for p in result.perms],
        "cycles": [p.cycle_text() for p in result.perms],
    }
    _emit(payload, config)
    return EXIT_PASS


def cmd_magic_pi(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    u = pi_n(args.n)
    report = verify_magic(BlockMagicUnitary.from_scalar(u))
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "magic pi",
        "construction": f"grid-transpose involution on {args.n * args.n} points",
        "perm": list(u.perm),
        "cycles": u.cycle_text(),
        "matrix": _sparse_payload(u.to_sparse()),
        "magic": report.to_json_dict(),
    }
    _emit(payload, config)
    return EXIT_PASS if report.passed else EXIT_REFUTED


# -- ck -------------------------------------------------------------------------


def _parse_claim_params(text: str | None, n: int):
    """Either 'A:D' broadcast to every edge, per-edge 'label=A:D,label=A:D',
    or 'published' for the n=2 values matching the printed operators."""
    if text is None or text == "published":
        if n != 2:
            raise UsageError("published claim parameters are only known for n=2")
        return ck.claim_params_matching_published(2)

    def one(chunk: str) -> ck.ClaimParams:
        try:
            a, d = chunk.split(":")
            return ck.ClaimParams(int(a), int(d))
        except ValueError as exc:
            raise UsageError(f"bad claim params {chunk!r}; expected A:D") from exc

    if "=" not in text:
        return one(text)
    out = {}
    for piece in text.split(","):
        label, _, chunk = piece.partition("=")
        if not label or not chunk:
            raise UsageError(f"bad claim params entry {piece!r}")
        out[label.strip()] = one(chunk.strip())
    return out


def _build_family(args, config: RunConfig) -> ck.CKFamily:
    name = args.family
    n = args.n
    try:
        if name == "pi2-finite":
            family = ck.family_pi2_finite()
        elif name == "pin-finite":
            family = ck.family_pi_n_finite(n)
        elif name == "Pi2-inf":
            family = ck.family_Pi2_infinite(config.truncation_N, config.margin)
        elif name == "pi2-inf":
            family = ck.family_pi2_infinite(config.truncation_N, config.margin)
        elif name == "pin-inf":
            family = ck.family_pi_n_infinite(n, config.truncation_N, config.margin)
        elif name == "claim":
            params = _parse_claim_params(args.params, n)
            family = ck.family_Pi_n_claim(n, params, config.truncation_N, config.margin)
        else:
            raise UsageError(f"unknown family {name!r}")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.dim is not None:
        backing = family.backing
        actual = backing.dim if isinstance(backing, ck.FiniteBacking) else backing.n
        if actual != args.dim:
            raise UsageError(f"family {name!r} has backing dimension {actual}, "
                             f"not {args.dim}")
    return family


def _family_payload(family: ck.CKFamily, command: str) -> dict:
    if isinstance(family.backing, ck.FiniteBacking):
        backing = {"kind": "finite", "dim": family.backing.dim}
    else:
        backing = {"kind": "truncated", "n": family.backing.n,
                   "margin": family.backing.margin, "window": family.backing.window}
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "construction": family.name,
        "experimental": family.experimental,
        "backing": backing,
        "graph": family.graph.to_json_dict(),
        "projection_origin": dict(sorted(family.projection_origin.items())),
    }


def cmd_ck_build(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    family = _build_family(args, config)
    payload = _family_payload(family, "ck build")
    payload["isometries"] = {label: _sparse_payload(op)
                             for label, op in sorted(family.isometries.items())}
    payload["projections"] = {label: _sparse_payload(op)
                              for label, op in sorted(family.projections.items())}
    if family.literal_projections is not None:
        payload["literal_projections"] = {
            label: _sparse_payload(op)
            for label, op in sorted(family.literal_projections.items())}
    _emit(payload, config)
    return EXIT_PASS


def cmd_ck_verify(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    family = _build_family(args, config)
    report = ck.verify_ck(family)
    payload = _family_payload(family, "ck verify")
    payload["report"] = report.to_json_dict()
    _emit(payload, config)
    return EXIT_PASS if report.passed else EXIT_REFUTED


def cmd_ck_closure(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    family = _build_family(args, config)
    if not isinstance(family.backing, ck.FiniteBacking):
        raise UsageError("span closure needs a finite family")
    dimension, full = ck.generated_dimension(family)
    payload = _family_payload(family, "ck closure")
    payload["dimension"] = dimension
    payload["full_matrix_algebra"] = full
    payload["ambient_dimension"] = family.backing.dim ** 2
    _emit(payload, config)
    return EXIT_PASS


# -- hopf -----------------------------------------------------------------------


def _hopf_model(args, config: RunConfig):
    """Returns (candidate, payload extras)."""
    model = args.model
    extras: dict = {}
    if model == "sd":
        if args.d is None:
            raise UsageError("--model sd needs --d")
        try:
            algebra, candidate = hopf.std_model(args.d)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        extras["construction"] = candidate.name
        return algebra, candidate, extras
    if model in ("literal", "group-ring"):
        if args.n is None:
            raise UsageError(f"--model {model} needs --n")
        try:
            candidate = hopf.literal_delta(args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        extras["construction"] = candidate.name
        if model == "group-ring":
            try:
                descriptor = hopf.group_ring_descriptor(args.group, args.n, args.shift)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            extras["descriptor"] = descriptor.to_json_dict()
        return candidate.source, candidate, extras
    raise UsageError(f"unknown model {model!r}")


def cmd_hopf_check(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    algebra, candidate, extras = _hopf_model(args, config)
    report = hopf.check_axioms(candidate, seed=config.seed)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "hopf check",
        "report": report.to_json_dict(),
    }
    payload.update(extras)
    passed = report.passed
    if isinstance(algebra, hopf.FunctionAlgebra):
        magic = hopf.magic_element_report(hopf.fundamental_matrix(algebra), algebra)
        payload["magic"] = {
            "passed": magic.passed,
            "projection_failures": [list(x) for x in magic.projection_failures],
            "row_sum_failures": list(magic.row_sum_failures),
            "col_sum_failures": list(magic.col_sum_failures),
            "orthogonality_failures": [[list(a), list(b)]
                                       for a, b in magic.orthogonality_failures],
        }
        passed = passed and magic.passed
    _emit(payload, config)
    return EXIT_PASS if passed else EXIT_REFUTED


def _vec_payload(algebra: hopf.StarAlgebra, vec: dict) -> list:
    out = []
    for idx in sorted(vec):
        re, im = vec[idx].to_pair()
        out.append([algebra.labels[idx], re, im])
    return out


def cmd_hopf_cointegral(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    if args.d is None:
        raise UsageError("hopf cointegral needs --d")
    try:
        algebra, candidate = hopf.std_model(args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = hopf.find_cointegral(candidate)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "hopf cointegral",
        "construction": candidate.name,
        "solutions": [_vec_payload(algebra, h) for h in report.solutions],
        "report": report.to_json_dict(),
    }
    _emit(payload, config)
    good = report.exists and all(v.ok for v in report.right_sided) \
        and all(v.ok for v in report.absorption)
    return EXIT_PASS if good else EXIT_REFUTED


_AW_BUILDERS = {
    "sd-group": lambda size: hopf.symmetric_group_algebra(size),
    "sd-fn": lambda size: hopf.FunctionAlgebra(size),
    "cyclic": lambda size: hopf.cyclic_group_algebra(size),
    "matrix": lambda size: hopf.MatrixUnitAlgebra(size),
}


def cmd_hopf_aw(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    if args.algebra not in _AW_BUILDERS:
        raise UsageError(f"unknown algebra {args.algebra!r}")
    if args.size is None:
        raise UsageError("hopf aw needs --size")
    try:
        algebra = _AW_BUILDERS[args.algebra](args.size)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "hopf aw",
        "construction": algebra.name,
        "dimension": algebra.dim,
        "seed": config.seed,
        "tolerance": config.tolerance,
    }
    try:
        blocks = hopf.artin_wedderburn(hopf.structure_constants_of(algebra),
                                       hopf.involution_of(algebra),
                                       config.tolerance, config.seed)
    except (hopf.NotSemisimpleError, hopf.ClusterResolutionError) as exc:
        payload["error"] = str(exc)
        _emit(payload, config)
        return EXIT_REFUTED
    payload["blocks"] = list(blocks)
    payload["sum_of_squares"] = sum(b * b for b in blocks)
    _emit(payload, config)
    return EXIT_PASS


def cmd_hopf_dqg(args, config: RunConfig) -> int:
    if config.output_format == "dot":
        raise UsageError("dot output applies to graph payloads only")
    if args.d is None:
        raise UsageError("hopf dqg needs --d")
    try:
        _, candidate = hopf.std_model(args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = hopf.discrete_qg_check(candidate, tolerance=config.tolerance,
                                    seed=config.seed)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "hopf dqg",
        "construction": candidate.name,
        "report": report.to_json_dict(),
    }
    _emit(payload, config)
    return EXIT_PASS if report.passed else EXIT_REFUTED


# -- report ----------------------------------------------------------------------


def cmd_report(args, config: RunConfig) -> int:
    from .report import run_report
    outcome = run_report(args.out, truncation_n=config.truncation_N,
                         margin=config.margin, seed=config.seed,
                         tolerance=config.tolerance)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "report",
        "output_dir": args.out,
        "checks": outcome.total,
        "as_expected": outcome.as_expected,
        "surprises": outcome.surprises,
        "files": outcome.files,
    }
    _emit(payload, config)
    return EXIT_PASS if not outcome.surprises else EXIT_REFUTED


# -- wiring -----------------------------------------------------------------------


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--format", "-f", choices=("json", "dot", "text"),
                        default=None, dest="format", help="output format")
    parser.add_argument("--truncation-n", "-N", type=int, default=None,
                        dest="truncation_n", help="truncation size for infinite families")
    parser.add_argument("--margin", type=int, default=None,
                        help="comparison margin (default: stride-derived)")
    parser.add_argument("--seed", type=int, default=None, help="random seed")
    parser.add_argument("--tol", type=float, default=None,
                        help="eigenvalue cluster tolerance")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphck", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    graph = sub.add_parser("graph", help="graph constructions")
    graph_sub = graph.add_subparsers(dest="action", metavar="ACTION")
    g_build = graph_sub.add_parser("build", help="build a named graph")
    g_build.add_argument("--family", choices=("relation", "pi"), required=True)
    g_build.add_argument("--n", type=int, default=2)
    _common_flags(g_build)
    g_build.set_defaults(handler=cmd_graph_build)

    magic = sub.add_parser("magic", help="magic-unitary tools")
    magic_sub = magic.add_subparsers(dest="action", metavar="ACTION")
    m_comm = magic_sub.add_parser("commutant",
                                  help="permutations commuting with a graph adjacency")
    m_comm.add_argument("--family", choices=("relation", "pi"), required=True)
    m_comm.add_argument("--n", type=int, default=2)
    m_comm.add_argument("--limit", type=int, default=10000,
                        help="search cap before the overflow flag is set")
    _common_flags(m_comm)
    m_comm.set_defaults(handler=cmd_magic_commutant)
    m_pi = magic_sub.add_parser("pi",
                                help="the grid-transpose involution as a magic unitary")
    m_pi.add_argument("--n", type=int, default=2)
    _common_flags(m_pi)
    m_pi.set_defaults(handler=cmd_magic_pi)

    ck_parser = sub.add_parser("ck", help="Cuntz-Krieger families")
    ck_sub = ck_parser.add_subparsers(dest="action", metavar="ACTION")
    for action, handler, description in (
            ("build", cmd_ck_build, "build a family and emit its operators"),
            ("verify", cmd_ck_verify, "check the defining relations"),
            ("closure", cmd_ck_closure, "dimension of the generated algebra")):
        p = ck_sub.add_parser(action, help=description)
        p.add_argument("--family", choices=CK_FAMILIES, required=True)
        p.add_argument("--n", type=int, default=2, help="grid size for pin/claim families")
        p.add_argument("--dim", type=int, default=None,
                       help="assert the backing dimension")
        p.add_argument("--params", default=None,
                       help="claim parameters: 'A:D', 'label=A:D,...', or 'published'")
        _common_flags(p)
        p.set_defaults(handler=handler)

    hopf_parser = sub.add_parser("hopf", help="axiom suites on exact models")
    hopf_sub = hopf_parser.add_subparsers(dest="action", metavar="ACTION")
    h_check = hopf_sub.add_parser("check", help="full axiom report")
    h_check.add_argument("--model", choices=("sd", "literal", "group-ring"), required=True)
    h_check.add_argument("--d", type=int, default=None, help="points for the sd model")
    h_check.add_argument("--n", type=int, default=None,
                         help="grid size for the literal/group-ring models")
    h_check.add_argument("--group", choices=("GL", "SL", "SO", "SU"), default="GL")
    h_check.add_argument("--shift", type=int, default=None)
    _common_flags(h_check)
    h_check.set_defaults(handler=cmd_hopf_check)
    h_coint = hopf_sub.add_parser("cointegral", help="cointegral solution space")
    h_coint.add_argument("--d", type=int, default=None)
    _common_flags(h_coint)
    h_coint.set_defaults(handler=cmd_hopf_cointegral)
    h_aw = hopf_sub.add_parser("aw", help="Wedderburn block sizes")
    h_aw.add_argument("--algebra", choices=sorted(_AW_BUILDERS), required=True)
    h_aw.add_argument("--size", type=int, default=None,
                      help="points (sd-*), order (cyclic), or matrix size")
    _common_flags(h_aw)
    h_aw.set_defaults(handler=cmd_hopf_aw)
    h_dqg = hopf_sub.add_parser("dqg", help="quantum-group hypothesis bundle")
    h_dqg.add_argument("--d", type=int, default=None)
    _common_flags(h_dqg)
    h_dqg.set_defaults(handler=cmd_hopf_dqg)

    report = sub.add_parser("report",
                            help="run the verification battery; write CSV, JSON, figures")
    report.add_argument("--out", required=True, help="output directory")
    _common_flags(report)
    report.set_defaults(handler=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        config = build_config(args)
        return handler(args, config)
    except UsageError as exc:
        print(f"graphck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
