"""Command-line front end: ``ferrers <command> FILE [options]``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .complex import LabeledCellComplex, build_shape_complex, lcm_lattice_degrees, specialize_labels
from .core import MonomialIdeal, Shape, generator_count_predicted, generators, specialize
from .errors import ConditionFailed, FerrersError, HypothesisError, MalformedInput, NotGuaranteedMinimal, NotThreshold
from .graphs import (
    Graph,
    analyze,
    check_condition,
    derive_shape,
    edge_ideal,
    is_threshold,
    threshold_report,
    threshold_shape,
)
from .oracle import cross_validate, height, report_from_betti
from .resolution import (
    BettiTable,
    betti_closed_form_totals,
    betti_from_faces,
    cellular_chain_complex,
    check_minimal,
    field_name,
    parse_field,
    verify_resolution,
)

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_MISMATCH, EXIT_CONDITION = 0, 2, 3, 4, 5
DEFAULT_FIELDS = ("2", "32003")


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    fields: list[int] = field(default_factory=lambda: [2, 32003])
    oracle: str = "both"
    format: str = "text"
    jobs: int = 1
    out: str | None = None
    specialize: bool = False


@dataclass
class Result:
    code: int
    data: dict
    text: str


def _default_fields() -> list[str]:
    env = os.environ.get("FERRERS_DEFAULT_FIELDS")
    if env:
        return [f for f in env.replace(";", ",").split(",") if f.strip()]
    return list(DEFAULT_FIELDS)


def load_input(path: str):
    """Read a JSON file and return a Shape, MonomialIdeal, LabeledCellComplex or Graph."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise MalformedInput(f"{path}: expected a JSON object")
    if "lambda" in data:
        return Shape.from_json(data)
    if "faces" in data:
        return LabeledCellComplex.from_json(data)
    if "generators" in data:
        return MonomialIdeal.from_json(data)
    if "edges" in data or "loops" in data:
        return Graph.from_json(data)
    raise MalformedInput(f"{path}: cannot tell what kind of object this is")


def _expect(obj, *kinds):
    if not isinstance(obj, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise MalformedInput(f"this command needs a {names} file, got {type(obj).__name__}")
    return obj


def _shape_text(shape: Shape) -> str:
    return f"λ = {shape.lam}, μ = {shape.mu}"


def _complex_for(shape: Shape, specialized: bool) -> LabeledCellComplex:
    X = build_shape_complex(shape)
    return specialize_labels(X) if specialized else X


def _betti_text(table: BettiTable) -> str:
    totals = table.totals()
    head = ", ".join(f"β{i} = {b}" for i, b in enumerate(totals) if i > 0)
    return f"{head}\n{table.format_text()}"


def cmd_shape(cfg: RunConfig) -> Result:
    shape = _expect(load_input(cfg.inputs[0]), Shape)
    ideal = generators(shape)
    try:
        predicted = generator_count_predicted(shape)
    except HypothesisError:
        predicted = None
    data = {
        "lambda": list(shape.lam),
        "mu": list(shape.mu),
        "n": shape.n,
        "m": shape.m,
        "diagram": shape.diagram().splitlines(),
        "generators": ideal.format(),
        "generator_count": len(ideal),
        "predicted_specialized_count": predicted,
        "lifting_hypothesis": shape.lifting_hypothesis(),
    }
    lines = [_shape_text(shape), shape.diagram(), f"{len(ideal)} generators: " + ", ".join(ideal.format())]
    if predicted is None:
        lines.append("μ_i >= i-1 fails: specialized generator count not predicted")
    else:
        lines.append(f"specialized generator count: {predicted}")
    return Result(EXIT_OK, data, "\n".join(lines))


def _resolution_payload(X: LabeledCellComplex) -> tuple[dict, str, bool]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NotGuaranteedMinimal)
        table = betti_from_faces(X)
    C = cellular_chain_complex(X)
    flagged = any(issubclass(w.category, NotGuaranteedMinimal) for w in caught)
    data = {
        "ranks": list(C.ranks),
        "f_vector": list(X.f_vector()),
        "minimal": check_minimal(C),
        "guaranteed_minimal": table.guaranteed,
        "betti": table.to_json(),
        "chain_complex": C.to_json(),
    }
    text = [f"ranks: {C.ranks}", f"f-vector: {X.f_vector()}", f"minimal: {data['minimal']}"]
    if flagged:
        text.append("warning: NotGuaranteedMinimal (μ_i < i-1); face counts are unverified Betti numbers")
    text.append(_betti_text(table))
    return data, "\n".join(text), flagged


def cmd_resolve(cfg: RunConfig) -> Result:
    shape = _expect(load_input(cfg.inputs[0]), Shape)
    X = _complex_for(shape, cfg.specialize)
    data, text, flagged = _resolution_payload(X)
    data = {"lambda": list(shape.lam), "mu": list(shape.mu), "specialized": cfg.specialize, **data}
    code = EXIT_HYPOTHESIS if flagged else EXIT_OK
    return Result(code, data, f"{_shape_text(shape)}{' (specialized)' if cfg.specialize else ''}\n{text}")


def cmd_betti(cfg: RunConfig) -> Result:
    obj = _expect(load_input(cfg.inputs[0]), Shape, MonomialIdeal, Graph)
    if isinstance(obj, Shape):
        table = betti_from_faces_quiet(_complex_for(obj, cfg.specialize))
        closed = list(betti_closed_form_totals(obj))
        data = {"betti": table.to_json(), "closed_form": closed, "guaranteed_minimal": table.guaranteed}
        text = f"{_shape_text(obj)}\n{_betti_text(table)}\nclosed form: {tuple(closed)}"
        if not table.guaranteed:
            text += "\nwarning: NotGuaranteedMinimal (μ_i < i-1); face counts are unverified Betti numbers"
        return Result(EXIT_OK if table.guaranteed else EXIT_HYPOTHESIS, data, text)
    ideal = edge_ideal(obj) if isinstance(obj, Graph) else obj
    table, problems = cross_validate(ideal, cfg.fields, cfg.oracle)
    data = {"betti": table.to_json(), "fields": [field_name(p) for p in cfg.fields], "oracle": cfg.oracle,
            "disagreements": problems}
    text = _betti_text(table) + "".join(f"\nMISMATCH: {p}" for p in problems)
    return Result(EXIT_MISMATCH if problems else EXIT_OK, data, text)


def betti_from_faces_quiet(X: LabeledCellComplex) -> BettiTable:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotGuaranteedMinimal)
        return betti_from_faces(X)


def cmd_specialize(cfg: RunConfig) -> Result:
    shape = _expect(load_input(cfg.inputs[0]), Shape)
    ideal = specialize(generators(shape))
    data = {"lambda": list(shape.lam), "mu": list(shape.mu), "ideal": ideal.to_json(), "generators": ideal.format(),
            "lifting_hypothesis": shape.lifting_hypothesis()}
    text = f"{_shape_text(shape)}\n{len(ideal)} generators: " + ", ".join(ideal.format())
    return Result(EXIT_OK, data, text)


def _verify_complex(X: LabeledCellComplex, cfg: RunConfig, compare_oracle: bool) -> tuple[dict, list[str], list[str]]:
    """Run the structural and acyclicity checks; return (data, text lines, failures)."""
    C = cellular_chain_complex(X)
    failures, lines = [], []
    dd = C.composition_is_zero()
    lines.append(f"∂∘∂ = 0: {'ok' if dd else 'FAILED'}")
    if not dd:
        failures.append("boundary of boundary is not zero")
    reports = []
    for p in cfg.fields:
        rep = verify_resolution(X, p, jobs=cfg.jobs)
        reports.append(rep.to_json())
        if rep.ok:
            lines.append(f"acyclic over {field_name(p)}: ok ({rep.degrees_checked} degrees)")
        else:
            d = rep.defects[0]
            deg = X.context.format(d.degree)
            lines.append(f"acyclic over {field_name(p)}: FAILED at degree {deg} (H~_{d.dim} of rank {d.rank})")
            failures.append(f"restriction to {deg} is not acyclic over {field_name(p)}")
    minimal = check_minimal(C)
    lines.append(f"minimal: {minimal}")
    data = {"boundary_squared_zero": dd, "acyclicity": reports, "minimal": minimal, "degrees": len(lcm_lattice_degrees(X))}
    if compare_oracle and not failures and minimal:
        ideal = MonomialIdeal.from_json({"variables": list(X.context.names),
                                         "generators": [list(v) for v in X.vertex_labels().values()]})
        table, problems = cross_validate(ideal, cfg.fields, cfg.oracle)
        faces = betti_from_faces_quiet(X)
        agree = faces == table
        data["oracle"] = {"oracle": cfg.oracle, "disagreements": problems, "matches_face_counts": agree}
        lines.append(f"oracles ({cfg.oracle}) agree with face counts: {'ok' if agree and not problems else 'FAILED'}")
        failures += problems
        if not agree:
            first = next(k for k in sorted(set(faces.entries) | set(table.entries), key=lambda k: (k[0], sum(k[1]), k[1]))
                         if faces.entries.get(k) != table.entries.get(k))
            failures.append(f"face count differs from oracle at i={first[0]}, degree {X.context.format(first[1])}")
    return data, lines, failures


def cmd_verify(cfg: RunConfig) -> Result:
    obj = _expect(load_input(cfg.inputs[0]), Shape, MonomialIdeal, LabeledCellComplex)
    if isinstance(obj, MonomialIdeal):
        table, problems = cross_validate(obj, cfg.fields, cfg.oracle)
        data = {"betti": table.to_json(), "disagreements": problems}
        lines = [_betti_text(table)] + [f"MISMATCH: {p}" for p in problems]
        return Result(EXIT_MISMATCH if problems else EXIT_OK, data, "\n".join(lines))
    header = []
    hypothesis_ok = True
    if isinstance(obj, Shape):
        X = _complex_for(obj, cfg.specialize)
        hypothesis_ok = not cfg.specialize or obj.lifting_hypothesis()
        header.append(_shape_text(obj) + (" (specialized)" if cfg.specialize else ""))
    else:
        X = obj
    data, lines, failures = _verify_complex(X, cfg, compare_oracle=hypothesis_ok)
    if not hypothesis_ok:
        lines.append("warning: NotGuaranteedMinimal (μ_i < i-1); oracle comparison skipped")
    data["failures"] = failures
    if failures:
        lines.append(f"first counterexample: {failures[0]}")
        code = EXIT_MISMATCH
    else:
        code = EXIT_OK if hypothesis_ok else EXIT_HYPOTHESIS
    lines.append("verdict: " + ("ok" if code == EXIT_OK else "FAILED" if code == EXIT_MISMATCH else "unverified"))
    return Result(code, data, "\n".join(header + lines))


def _report_text(rep) -> str:
    b = ", ".join(f"β{i} = {v}" for i, v in enumerate(rep.betti_totals) if i > 0)
    return (f"{b}\nheight = {rep.height}, depth = {rep.depth}, dim = {rep.dim}, pdim = {rep.pdim}, "
            f"reg = {rep.reg}, Cohen-Macaulay: {rep.cohen_macaulay}")


def _oracle_check(G: Graph, rep, cfg: RunConfig) -> tuple[dict, list[str]]:
    ideal = edge_ideal(G)
    table, problems = cross_validate(ideal, cfg.fields, cfg.oracle)
    oracle_rep = report_from_betti(table, height(ideal))
    if oracle_rep != rep:
        problems.append("closed-form report differs from the oracle")
    return oracle_rep.to_json(), problems


def cmd_graph(cfg: RunConfig, action: str) -> Result:
    G = _expect(load_input(cfg.inputs[0]), Graph)
    if action == "shape":
        d = derive_shape(G)
        ok = check_condition(G, d)
        data = {**d.to_json(), "condition": ok}
        text = f"ordering: {list(d.ordering)}\nn = {d.n}, λ = {d.lam}, μ = {d.mu}\ncondition: {ok}"
        return Result(EXIT_OK, data, text)
    if action == "threshold":
        if G.loops:
            raise MalformedInput("threshold recognition needs a loop-free graph")
        cert = is_threshold(G)
        if cert is None:
            raise NotThreshold("no isolated or dominating vertex left to peel")
        ts = threshold_shape(G)
        rep = threshold_report(G)
        oracle_json, problems = _oracle_check(G, rep, cfg)
        data = {
            "weights": list(cert.weights),
            "creation_sequence": [{"vertex": v, "kind": k} for v, k in cert.creation],
            "shape": ts.to_json(),
            "report": rep.to_json(),
            "oracle": oracle_json,
            "disagreements": problems,
        }
        text = (f"threshold: weights {list(cert.weights)}\n"
                f"creation: {' '.join(f'{v}{k[0]}' for v, k in cert.creation)}\n"
                f"n = {ts.n}, λ = {ts.lam}, μ = {ts.mu}\n{_report_text(rep)}")
        if not ts.agrees_with_general:
            text += "\nnote: degree-based shape differs from the general procedure"
        text += "".join(f"\nMISMATCH: {p}" for p in problems)
        return Result(EXIT_MISMATCH if problems else EXIT_OK, data, text)
    # analyze
    try:
        d = derive_shape(G)
        rep = analyze(G, d.ordering)
    except (ConditionFailed, HypothesisError) as exc:
        ideal = edge_ideal(G)
        table, problems = cross_validate(ideal, cfg.fields, cfg.oracle)
        oracle_rep = report_from_betti(table, height(ideal))
        data = {"source": "oracle", "reason": exc.reason, "message": str(exc), "report": oracle_rep.to_json(),
                "disagreements": problems}
        text = f"{exc.reason}: {exc}\n[oracle only]\n{_report_text(oracle_rep)}"
        return Result(EXIT_MISMATCH if problems else exc.exit_code, data, text)
    oracle_json, problems = _oracle_check(G, rep, cfg)
    data = {"source": "closed_form", **d.to_json(), "report": rep.to_json(), "oracle": oracle_json,
            "disagreements": problems}
    text = f"ordering: {list(d.ordering)}\nn = {d.n}, λ = {d.lam}, μ = {d.mu}\n{_report_text(rep)}"
    text += "\noracle: " + ("agrees" if not problems else "; ".join(problems))
    return Result(EXIT_MISMATCH if problems else EXIT_OK, data, text)


def cmd_export(cfg: RunConfig, what: str) -> Result:
    obj = load_input(cfg.inputs[0])
    if isinstance(obj, Graph):
        if what == "dot":
            return Result(EXIT_OK, {"dot": obj.to_dot()}, obj.to_dot().rstrip("\n"))
        if what == "ideal":
            ideal = edge_ideal(obj)
            return Result(EXIT_OK, ideal.to_json(), "\n".join(ideal.format()))
        raise MalformedInput(f"cannot export {what} from a graph")
    if isinstance(obj, Shape):
        X = _complex_for(obj, cfg.specialize)
    elif isinstance(obj, LabeledCellComplex):
        X = obj
    else:
        raise MalformedInput("export needs a shape, complex or graph file")
    if what == "complex":
        data = X.to_json()
        return Result(EXIT_OK, data, json.dumps(data, indent=2))
    if what == "chain":
        data = cellular_chain_complex(X).to_json()
        return Result(EXIT_OK, data, json.dumps(data, indent=2))
    if what == "ideal":
        ideal = MonomialIdeal.from_json({"variables": list(X.context.names),
                                         "generators": [list(v) for v in X.vertex_labels().values()]})
        return Result(EXIT_OK, ideal.to_json(), "\n".join(ideal.format()))
    return Result(EXIT_OK, {"dot": X.to_dot()}, X.to_dot().rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", action="append", default=None, metavar="P",
                        help="prime or Q; repeatable (default: 2 and 32003, or $FERRERS_DEFAULT_FIELDS)")
    common.add_argument("--oracle", choices=("koszul", "taylor", "both"), default="both")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, metavar="K", help="worker processes for verification")
    common.add_argument("--specialize", action="store_true", help="use the labels with y_i replaced by x_i")

    parser = argparse.ArgumentParser(prog="ferrers", description="Resolutions of generalized Ferrers ideals.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("shape", "validate a shape and list its generators"),
        ("resolve", "build the cellular resolution"),
        ("betti", "Betti table of a shape, ideal or graph"),
        ("specialize", "specialized ideal of a shape"),
        ("verify", "check a shape, ideal or complex file"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("input")
    g = sub.add_parser("graph", parents=[common], help="edge ideals of graphs")
    g.add_argument("action", choices=("analyze", "shape", "threshold"))
    g.add_argument("input")
    e = sub.add_parser("export", parents=[common], help="export complex, chain complex, ideal or DOT")
    e.add_argument("what", choices=("complex", "chain", "ideal", "dot"))
    e.add_argument("input")
    return parser


def _config(args) -> RunConfig:
    fields = [parse_field(f) for f in (args.field or _default_fields())]
    if not fields:
        raise MalformedInput("at least one field is needed")
    if args.jobs < 1:
        raise MalformedInput("--jobs must be positive")
    return RunConfig(args.command, [args.input], list(dict.fromkeys(fields)), args.oracle, args.format,
                     args.jobs, args.out, args.specialize)


def run(argv: Sequence[str] | None = None) -> Result:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "graph":
            return cmd_graph(cfg, args.action)
        if args.command == "export":
            return cmd_export(cfg, args.what)
        return {"shape": cmd_shape, "resolve": cmd_resolve, "betti": cmd_betti,
                "specialize": cmd_specialize, "verify": cmd_verify}[args.command](cfg)
    except FerrersError as exc:
        return Result(exc.exit_code, {"error": exc.reason, "message": str(exc)}, f"error [{exc.reason}]: {exc}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    result = run(argv)
    body = json.dumps(result.data, indent=2, ensure_ascii=False) if args.format == "json" else result.text
    if "error" in result.data and args.format == "text":
        print(body, file=sys.stderr)
    elif args.out:
        Path(args.out).write_text(body + "\n")
    else:
        print(body)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
