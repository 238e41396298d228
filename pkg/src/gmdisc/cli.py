"""``gm``: run the discreteness algorithm from the command line.

Exit codes: 0 for any verdict, 1 when ``gm oracle`` finds a discrepancy,
2 for usage, I/O and schema errors, 3 when an input violates an invariant
(identity or elementary pair, bad determinant), 4 when max_steps is hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from gmdisc.core import (
    GMError,
    MaxStepsExceeded,
    NotApplicable,
    RunConfig,
    Verdict,
    OrderedPair,
    coherently_orient,
    first_linear_exit,
    hh_step_count,
    orient_hp,
    run,
    step_count_hp,
    stopping_test,
)
from gmdisc.geometry import GeometryError
from gmdisc.moebius import DET_TOL, DomainError, MoebiusElement, classify, from_disc_model
from gmdisc.oracle import InstanceSpec, UnsatisfiableSpec, enumerate_words, linear_step_count, random_instance

log = logging.getLogger("gmdisc.cli")

EXIT_OK = 0
EXIT_DISCREPANCY = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3
EXIT_MAX_STEPS = 4

SEED_DEMO = {"model": "uhp", "A": [[1, 2], [0, 1]], "B": [[1, 0], [2, 1]]}


class InputError(ValueError):
    """Malformed or schema-violating input (exit code 2)."""


class InvariantError(ValueError):
    """Well-formed input that violates a mathematical precondition (exit code 3)."""


# ---------------------------------------------------------------------------
# schemas


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("gmdisc").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = []
    for name in ("input", "verdict", "batch_record"):
        schema = load_schema(name)
        pairs.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(pairs)


def validator(name: str) -> jsonschema.protocols.Validator:
    schema = load_schema(name)
    cls = jsonschema.validators.validator_for(schema)
    return cls(schema, registry=_registry())


# ---------------------------------------------------------------------------
# configuration


def resolve_tolerance(flag: float | None, env: dict | None = None) -> float:
    """--tolerance beats GM_TOLERANCE beats the default."""
    if flag is not None:
        return flag
    env = os.environ if env is None else env
    raw = env.get("GM_TOLERANCE")
    if raw:
        try:
            return float(raw)
        except ValueError as exc:
            raise InputError(f"GM_TOLERANCE is not a number: {raw!r}") from exc
    return RunConfig().tol


def config_from_args(args) -> RunConfig:
    try:
        return RunConfig(
            tol=resolve_tolerance(args.tolerance),
            ratio_tol=args.ratio_tolerance,
            max_steps=args.max_steps,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# ---------------------------------------------------------------------------
# input normalisation


def _entry(x, model: str):
    if isinstance(x, list):
        if model != "disc":
            raise InputError("complex entries are only allowed with model 'disc'")
        return complex(x[0], x[1])
    return x


def parse_input(doc, default_model: str = "uhp", rescale: bool = False) -> tuple[dict, MoebiusElement, MoebiusElement]:
    """Validate a run document and return (normalized input, A, B)."""
    errors = sorted(validator("input").iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.path) or "document"
        raise InputError(f"schema violation at {where}: {e.message}")
    model = doc.get("model", default_model)
    gens = []
    for name in ("A", "B"):
        m = [[_entry(x, model) for x in row] for row in doc[name]]
        try:
            if model == "disc":
                x = from_disc_model(m)
            else:
                (a, b), (c, d) = m
                det = a * d - b * c
                if not det > 0:
                    raise InvariantError(f"generator {name} has determinant {det!r}; it must be positive")
                if not rescale and abs(det - 1.0) > DET_TOL:
                    raise InvariantError(
                        f"generator {name} has determinant {det!r}, not 1 within {DET_TOL:g} (use --rescale to normalise)"
                    )
                x = MoebiusElement.from_matrix(m)
        except DomainError as exc:
            raise InvariantError(f"generator {name}: {exc}") from exc
        gens.append(MoebiusElement.from_matrix(x.as_matrix(), normalize_sign=True))
    A, B = gens
    normalized = {"model": "uhp", "A": A.as_matrix(), "B": B.as_matrix()}
    if "id" in doc:
        normalized["id"] = doc["id"]
    return normalized, A, B


# ---------------------------------------------------------------------------
# output


def _generator_doc(x: MoebiusElement, word) -> dict:
    return {"matrix": x.as_matrix(), "word": str(word), "trace": x.trace, "class": classify(x).value}


def verdict_document(normalized: dict, config: RunConfig, verdict: Verdict, trace: bool) -> dict:
    doc = {
        "verdict": verdict.outcome.value,
        "reason": verdict.reason,
        "f_sequence": list(verdict.f_sequence),
        "input": normalized,
        "config": {"tolerance": config.tol, "ratio_tolerance": config.ratio_tol, "max_steps": config.max_steps},
        "stopping_generators": None,
        "shortest_lengths": verdict.shortest_lengths,
        "cusps": None if verdict.shortest is None else verdict.shortest.cusps,
        "third_word": None if verdict.shortest is None else str(verdict.shortest.third_word),
    }
    sp = verdict.stopping_pair
    if sp is not None:
        doc["stopping_generators"] = {"C": _generator_doc(sp.C, sp.word_C), "D": _generator_doc(sp.D, sp.word_D)}
    if trace:
        doc["steps"] = [s.to_dict() for s in verdict.steps]
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)


def evaluate(doc, config: RunConfig, trace: bool = False, default_model: str = "uhp", rescale: bool = False) -> dict:
    normalized, A, B = parse_input(doc, default_model, rescale)
    try:
        verdict = run(A, B, config)
    except MaxStepsExceeded:
        raise
    except (GMError, GeometryError, DomainError) as exc:
        raise InvariantError(str(exc)) from exc
    return verdict_document(normalized, config, verdict, trace)


def _error_type(exc: BaseException) -> str:
    if isinstance(exc, MaxStepsExceeded):
        return "max-steps"
    if isinstance(exc, InvariantError):
        return "invariant"
    return "input"


def _exit_code(exc: BaseException) -> int:
    return {"max-steps": EXIT_MAX_STEPS, "invariant": EXIT_INVARIANT}.get(_error_type(exc), EXIT_USAGE)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_document(source: str):
    text = source if source.lstrip().startswith("{") else _read_text(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _fail(exc: BaseException) -> int:
    print(f"gm: error ({_error_type(exc)}): {exc}", file=sys.stderr)
    return _exit_code(exc)


# ---------------------------------------------------------------------------
# commands


def cmd_run(args) -> int:
    try:
        config = config_from_args(args)
        if args.seed_demo:
            doc = dict(SEED_DEMO)
        elif args.input is None:
            raise InputError("give an input path, inline JSON, '-' for stdin, or --seed-demo")
        else:
            doc = _load_document(args.input)
        out = evaluate(doc, config, args.trace, args.model, args.rescale)
        if args.svg:
            _render_to(out["input"], config, args.svg)
    except (InputError, InvariantError, MaxStepsExceeded) as exc:
        return _fail(exc)
    _write(dumps(out) + "\n", args.output)
    return EXIT_OK


def _batch_line(job) -> str:
    index, line, config, trace, model, rescale = job
    try:
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc}") from exc
        record = {"line": index, "ok": True, "result": evaluate(doc, config, trace, model, rescale)}
    except (InputError, InvariantError, MaxStepsExceeded) as exc:
        record = {"line": index, "ok": False, "error": {"type": _error_type(exc), "message": str(exc)}}
    return dumps(record)


def batch_lines(lines, config: RunConfig, jobs: int = 1, trace: bool = False, model: str = "uhp", rescale: bool = False):
    """Evaluate JSONL lines; output order follows input order for any ``jobs``."""
    work = [
        (i, line, config, trace, model, rescale) for i, line in enumerate(lines, start=1) if line.strip()
    ]
    if jobs <= 1 or len(work) <= 1:
        return [_batch_line(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_batch_line, work, chunksize=max(1, len(work) // (4 * jobs))))


def cmd_batch(args) -> int:
    try:
        config = config_from_args(args)
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        text = _read_text(args.input)
    except InputError as exc:
        return _fail(exc)
    out = batch_lines(text.splitlines(), config, args.jobs, args.trace, args.model, args.rescale)
    _write("".join(line + "\n" for line in out), args.output)
    return EXIT_OK


def _render_to(normalized: dict, config: RunConfig, path: str) -> None:
    from gmdisc.render import RenderError, render_svg

    A = MoebiusElement.from_matrix(normalized["A"])
    B = MoebiusElement.from_matrix(normalized["B"])
    try:
        svg, scene = render_svg(A, B, config.tol)
    except (RenderError, GMError, GeometryError, DomainError) as exc:
        raise InvariantError(str(exc)) from exc
    if scene.chords:
        print(f"gm: note: {scene.chords} near-diameter geodesic(s) drawn as chords", file=sys.stderr)
    _write(svg, path)


def cmd_render(args) -> int:
    try:
        config = config_from_args(args)
        doc = dict(SEED_DEMO) if args.seed_demo else _load_document(args.input) if args.input else None
        if doc is None:
            raise InputError("give an input path, inline JSON, '-' for stdin, or --seed-demo")
        normalized, _, _ = parse_input(doc, args.model, args.rescale)
        _render_to(normalized, config, args.svg or "-")
    except (InputError, InvariantError) as exc:
        return _fail(exc)
    return EXIT_OK


def compare_counts(pair_kind: str, samples: int, seed: int, config: RunConfig) -> dict:
    """Closed-form step counts against the brute force oracle.

    HH draws whose run stops before or inside the linear steps never use the
    closed form; they are skipped and counted.
    """
    agree = boundary = skipped = 0
    discrepancies = []
    draw = seed
    while agree + len(discrepancies) < samples:
        if draw - seed > 200 * samples:
            raise UnsatisfiableSpec("too few usable instances")
        if pair_kind == "hh":
            spec = InstanceSpec(seed=draw, pair_class="hh", separation_range=(0.0, 0.2))
        else:
            spec = InstanceSpec(seed=draw, pair_class="hp")
        draw += 1
        A, B = random_instance(spec)
        if pair_kind == "hh":
            pair = coherently_orient(A, B, config.tol)
            if stopping_test(pair, config.tol).stop:
                skipped += 1
                continue
            n, flagged = hh_step_count(pair, config)
            if first_linear_exit(pair, n, 2.0 + config.tol) is not None:
                skipped += 1
                continue
            boundary += flagged
        else:
            pair = orient_hp(OrderedPair(A, B), config.tol)
            try:
                n = step_count_hp(pair.C, pair.D, config.tol)
            except NotApplicable:
                n = 0
        m = linear_step_count(pair.C, pair.D, config.tol)
        if m == n:
            agree += 1
        else:
            discrepancies.append({"seed": spec.seed, "formula": n, "oracle": m})
    return {
        "class": pair_kind,
        "samples": samples,
        "agree": agree,
        "boundary_flagged": boundary,
        "skipped": skipped,
        "discrepancies": discrepancies,
    }


def cmd_oracle(args) -> int:
    try:
        config = config_from_args(args)
        if args.oracle_cmd == "compare":
            if args.samples < 1:
                raise InputError("--samples must be at least 1")
            report = compare_counts(args.pair_class, args.samples, args.seed, config)
            print(
                f"{report['agree']}/{report['samples']} agree ({report['boundary_flagged']} boundary-flagged, "
                f"{report['skipped']} draws skipped: run stops before the step count is used)",
                file=sys.stderr,
            )
            _write(dumps(report) + "\n", args.output)
            return EXIT_DISCREPANCY if report["discrepancies"] else EXIT_OK
        # words
        if args.max_len < 1 or args.max_len > 12:
            raise InputError("--max-len must be between 1 and 12")
        doc = dict(SEED_DEMO) if args.input is None else _load_document(args.input)
        _, A, B = parse_input(doc, args.model, args.rescale)
        rows = [
            {"word": str(r.word), "class": r.kind.value, "length": r.length}
            for r in enumerate_words(A, B, args.max_len, config.tol)
        ]
        _write(dumps({"max_len": args.max_len, "words": rows}) + "\n", args.output)
        return EXIT_OK
    except (InputError, InvariantError, UnsatisfiableSpec) as exc:
        return _fail(exc)


# ---------------------------------------------------------------------------
# argument parsing


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tolerance", type=float, default=None, help="global tolerance (default 1e-9, or GM_TOLERANCE)")
    p.add_argument("--ratio-tolerance", type=float, default=1e-7, help="integer-boundary band for length ratios")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--model", choices=("uhp", "disc"), default="uhp", help="model for inputs without a 'model' key")
    p.add_argument("--rescale", action="store_true", help="accept any positive determinant and rescale")
    p.add_argument("--trace", action="store_true", help="include per-step telemetry")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared()
    parser = argparse.ArgumentParser(prog="gm", description="Discreteness of two-generator real Moebius groups.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[shared], help="run one generator pair")
    p.add_argument("input", nargs="?", help="JSON file, inline JSON, or '-' for stdin")
    p.add_argument("--seed-demo", action="store_true", help="run the bundled Sanov example")
    p.add_argument("--svg", default=None, help="also render the configuration to this path")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("batch", parents=[shared], help="run a JSONL file, one pair per line")
    p.add_argument("input", help="JSONL file or '-'")
    p.add_argument("-j", "--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("render", parents=[shared], help="draw the configuration as SVG")
    p.add_argument("input", nargs="?")
    p.add_argument("--seed-demo", action="store_true")
    p.add_argument("--svg", default=None, help="SVG path (default stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("oracle", help="brute force cross-checks")
    osub = p.add_subparsers(dest="oracle_cmd", required=True)
    c = osub.add_parser("compare", parents=[shared], help="step-count formulas against the oracle")
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--class", dest="pair_class", choices=("hh", "hp"), default="hh")
    w = osub.add_parser("words", parents=[shared], help="enumerate short words")
    w.add_argument("input", nargs="?", help="generator pair (default: Sanov pair)")
    w.add_argument("--max-len", type=int, default=4)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
