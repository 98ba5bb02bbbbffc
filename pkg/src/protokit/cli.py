"""Command-line entry point.

Exit codes: 0 accept/success, 1 reject/invalid, 2 usage or input error,
3 resource limit.  Payloads (JSON, PDDL, plans) go to stdout; everything
else goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from protokit.jsonio import DuplicateKey, JsonSyntaxError, compare, format_path, parse_json
from protokit.pddl.generators import KINDS, GenSpec, InvalidSpec, instance_filenames, instance_texts
from protokit.pddl.parser import parse_domain, parse_problem
from protokit.pddl.plan import parse_plan
from protokit.pddl.planner import LimitExceeded, SearchLimits, Solved, solve_optimal
from protokit.pddl.sexpr import PddlError
from protokit.pddl.tasks import ref_from_json
from protokit.pddl.validate import Verdict, validate_plan, verify
from protokit.pipeline.build import BuildConfig, build_pddl_records, build_prolog_records, selfcheck
from protokit.pipeline.evaluate import evaluate_dataset
from protokit.pipeline.prompts import TEMPLATE_IDS, MissingField, UnknownTemplate, render_prompt
from protokit.pipeline.providers import HttpProvider, ProviderUnavailable, ScriptedProvider
from protokit.pipeline.records import SchemaError, dumps_jsonl, parse_jsonl, read_jsonl
from protokit.pipeline.stratify import RangeError, filter_dataset, stratify
from protokit.prolog.engine import ResourceLimit, SolveLimits
from protokit.prolog.runner import run_solve_json_text
from protokit.prolog.terms import PrologError

EXIT_OK, EXIT_REJECT, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

log = logging.getLogger("protokit")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit_verdict(v: Verdict) -> int:
    print(v.to_json())
    if not v.accept:
        print(v.reason, file=sys.stderr)
    return EXIT_OK if v.accept else EXIT_REJECT


def _load_task(args):
    domain = parse_domain(_read(args.domain))
    problem = parse_problem(_read(args.problem), domain)
    return domain, problem


# pddl -----------------------------------------------------------------------


def cmd_pddl_validate(args) -> int:
    domain, problem = _load_task(args)
    plan = parse_plan(_read(args.plan))
    report = validate_plan(domain, problem, plan)
    if report.valid:
        return _emit_verdict(Verdict(True, f"valid plan of cost {report.cost}"))
    f = report.failure
    return _emit_verdict(Verdict(False, f"{f.kind}: {f.detail}", f.step))


def cmd_pddl_solve(args) -> int:
    domain, problem = _load_task(args)
    limits = SearchLimits(max_nodes=args.max_nodes, max_depth=args.max_depth, max_seconds=args.max_seconds)
    result = solve_optimal(domain, problem, limits)
    if isinstance(result, Solved):
        sys.stdout.write(result.plan.to_text())
        print(f"; cost {result.cost}, {result.nodes_expanded} nodes expanded", file=sys.stderr)
        return EXIT_OK
    if isinstance(result, LimitExceeded):
        print(f"search limit exceeded ({result.reason}) after {result.nodes_expanded} nodes", file=sys.stderr)
        return EXIT_LIMIT
    print(f"unsolvable ({result.nodes_expanded} nodes expanded)", file=sys.stderr)
    return EXIT_REJECT


def cmd_pddl_verify(args) -> int:
    try:
        obj = parse_json(_read(args.ref))
    except (JsonSyntaxError, DuplicateKey) as e:
        raise InputError(f"reference file: {e}") from None
    if isinstance(obj, dict) and "task" in obj and isinstance(obj["task"], dict):
        obj = obj["task"]  # a whole dataset record is accepted too
    if not isinstance(obj, dict):
        raise InputError("reference must be a JSON object")
    kind = obj.setdefault("kind", args.task)
    if kind != args.task:
        raise InputError(f"reference is a {kind} task, not {args.task}")
    try:
        ref = ref_from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed {args.task} reference: {e}") from None
    domain, problem = _load_task(args)
    plan = parse_plan(_read(args.plan))
    mode = args.mode or obj.get("mode", "positional")
    return _emit_verdict(verify(domain, problem, plan, ref, mode))


# gen ------------------------------------------------------------------------

_SIZE_FLAGS = ("blocks", "cities", "locations", "trucks", "airplanes", "packages", "side", "walk")


def cmd_gen(args) -> int:
    sizes = {k: getattr(args, k) for k in _SIZE_FLAGS if getattr(args, k) is not None}
    spec = GenSpec(args.kind, seed=args.seed, **sizes)
    domain_text, problem_text = instance_texts(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in zip(instance_filenames(spec), (domain_text, problem_text)):
        (out / name).write_text(text, encoding="utf-8")
        print(out / name)
    return EXIT_OK


# prolog ---------------------------------------------------------------------


def cmd_prolog_run(args) -> int:
    limits = SolveLimits(max_steps=args.max_steps, max_depth=args.max_depth)
    text = run_solve_json_text(_read(args.file), limits)
    print(text)
    return EXIT_OK


# json -----------------------------------------------------------------------


def cmd_json_compare(args) -> int:
    values = []
    for path in (args.a, args.b):
        try:
            values.append(parse_json(_read(path)))
        except (JsonSyntaxError, DuplicateKey) as e:
            raise InputError(f"{path}: {e}") from None
    diffs = compare(*values)
    verdict = {
        "accept": not diffs,
        "reason": "equal" if not diffs else f"{len(diffs)} difference(s)",
        "diffs": [{"path": list(d.path), "kind": d.kind} for d in diffs],
    }
    print(json.dumps(verdict, separators=(",", ":"), ensure_ascii=False))
    for d in diffs:
        print(f"{d.kind} at {format_path(d.path)}", file=sys.stderr)
    return EXIT_OK if not diffs else EXIT_REJECT


# dataset --------------------------------------------------------------------


def _provider(args):
    if getattr(args, "mock_dir", None):
        return ScriptedProvider(args.mock_dir)
    if os.environ.get("PROTO_PROVIDER_URL"):
        return HttpProvider.from_env(timeout=args.timeout)
    return None


def _records(path):
    if path == "-":
        return parse_jsonl(sys.stdin.read())
    try:
        return read_jsonl(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None


def _counts(records) -> dict:
    _, counts = filter_dataset(records)
    return counts


def cmd_dataset_stratify(args) -> int:
    records = _records(args.input)
    provider = _provider(args)
    if provider is not None:
        records = evaluate_dataset(records, provider, n=args.n, retries=args.retries, workers=args.workers)
    else:
        log.info("no provider configured; stratifying stored pass rates")
        for r in records:
            if r.pass_rate is None:
                raise InputError(f"record {r.id} has no pass_rate and no provider is configured")
            r.bucket = stratify(round(r.pass_rate * args.n), args.n).value
    _write(args.output, dumps_jsonl(records))
    print(json.dumps(_counts(records), separators=(",", ":")), file=sys.stderr)
    return EXIT_OK


def cmd_dataset_filter(args) -> int:
    kept, counts = filter_dataset(_records(args.input))
    _write(args.output, dumps_jsonl(kept))
    print(json.dumps(counts, separators=(",", ":")), file=sys.stderr)
    return EXIT_OK


def cmd_dataset_selfcheck(args) -> int:
    records = _records(args.input)
    problems = selfcheck(records, SolveLimits(max_steps=args.max_steps))
    for rid, why in problems:
        print(f"{rid}: {why}", file=sys.stderr)
    verdict = {
        "accept": not problems,
        "reason": f"{len(records)} records checked, {len(problems)} inconsistent",
        "failures": [rid for rid, _ in problems],
    }
    print(json.dumps(verdict, separators=(",", ":")))
    return EXIT_OK if not problems else EXIT_REJECT


def cmd_dataset_build(args) -> int:
    kinds = tuple(args.kinds.split(",")) if args.kinds else ("blocksworld", "logistics")
    records = build_pddl_records(BuildConfig(seed=args.seed, kinds=kinds, instances=args.instances))
    if args.prolog_dir:
        prolog, dropped = build_prolog_records(sorted(Path(args.prolog_dir).glob("*.pl")))
        for rid, why in dropped:
            print(f"dropped {rid}: {why}", file=sys.stderr)
        records = prolog + records
    _write(args.output, dumps_jsonl(records))
    print(f"{len(records)} records", file=sys.stderr)
    return EXIT_OK


# prompt ---------------------------------------------------------------------


def cmd_prompt_render(args) -> int:
    fields = {}
    for item in args.field or []:
        key, sep, path = item.partition("=")
        if not sep or not key:
            raise InputError(f"--field expects key=file, got {item!r}")
        fields[key] = _read(path)
    sys.stdout.write(render_prompt(args.template, fields))
    return EXIT_OK


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="protokit", description="Verifiable Prolog/PDDL reasoning data tools.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    pddl = sub.add_parser("pddl", help="parse, validate, solve and verify planning tasks")
    psub = pddl.add_subparsers(dest="action", required=True)

    def task_files(q, plan=True):
        q.add_argument("--domain", required=True)
        q.add_argument("--problem", required=True)
        if plan:
            q.add_argument("--plan", required=True)

    q = psub.add_parser("validate", help="simulate a plan and report the first failure")
    task_files(q)
    q.set_defaults(func=cmd_pddl_validate)

    q = psub.add_parser("solve", help="find a minimum-length plan by breadth-first search")
    task_files(q, plan=False)
    d = SearchLimits()
    q.add_argument("--max-nodes", type=int, default=d.max_nodes)
    q.add_argument("--max-depth", type=int, default=d.max_depth)
    q.add_argument("--max-seconds", type=float, default=d.max_seconds)
    q.set_defaults(func=cmd_pddl_solve)

    q = psub.add_parser("verify", help="check a candidate plan against a task reference")
    q.add_argument("--task", required=True, choices=("generation", "completion", "reordering"))
    q.add_argument("--ref", required=True, help="JSON task reference (or a dataset record)")
    q.add_argument("--mode", choices=("positional", "subsequence"))
    task_files(q)
    q.set_defaults(func=cmd_pddl_verify)

    q = sub.add_parser("gen", help="generate a planning instance")
    q.add_argument("--kind", required=True, choices=KINDS)
    q.add_argument("--seed", type=int, required=True)
    for flag in _SIZE_FLAGS:
        q.add_argument(f"--{flag}", type=int)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_gen)

    prolog = sub.add_parser("prolog", help="run subset-Prolog programs")
    qsub = prolog.add_subparsers(dest="action", required=True)
    q = qsub.add_parser("run", help="load FILE, call solve_json once, print its JSON")
    q.add_argument("file")
    sl = SolveLimits()
    q.add_argument("--max-steps", type=int, default=sl.max_steps)
    q.add_argument("--max-depth", type=int, default=sl.max_depth)
    q.set_defaults(func=cmd_prolog_run)

    js = sub.add_parser("json", help="structural JSON comparison")
    jsub = js.add_subparsers(dest="action", required=True)
    q = jsub.add_parser("compare", help="compare expected A with actual B")
    q.add_argument("a")
    q.add_argument("b")
    q.set_defaults(func=cmd_json_compare)

    ds = sub.add_parser("dataset", help="JSONL dataset operations")
    dsub = ds.add_subparsers(dest="action", required=True)
    q = dsub.add_parser("stratify", help="evaluate pass rates and assign buckets")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--out", dest="output", required=True)
    q.add_argument("--n", type=int, default=10)
    q.add_argument("--mock-dir", help="scripted provider directory (overrides PROTO_PROVIDER_URL)")
    q.add_argument("--retries", type=int, default=2)
    q.add_argument("--timeout", type=float, default=60.0)
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(func=cmd_dataset_stratify)

    q = dsub.add_parser("filter", help="drop Excluded records")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--out", dest="output", required=True)
    q.set_defaults(func=cmd_dataset_filter)

    q = dsub.add_parser("selfcheck", help="re-derive answers and re-verify source plans")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--max-steps", type=int, default=SolveLimits().max_steps)
    q.set_defaults(func=cmd_dataset_selfcheck)

    q = dsub.add_parser("build", help="build planning (and optionally Prolog) records")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--instances", type=int, default=3, help="instances per planning kind")
    q.add_argument("--kinds", help="comma-separated planning kinds")
    q.add_argument("--prolog-dir", help="directory of solve_json programs (*.pl)")
    q.add_argument("--out", dest="output", required=True)
    q.set_defaults(func=cmd_dataset_build)

    pr = sub.add_parser("prompt", help="render prompt templates")
    rsub = pr.add_subparsers(dest="action", required=True)
    q = rsub.add_parser("render", help="fill a template's placeholders from files")
    q.add_argument("--template", required=True, choices=TEMPLATE_IDS)
    q.add_argument("--field", action="append", metavar="KEY=FILE")
    q.set_defaults(func=cmd_prompt_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (InputError, PddlError, PrologError, JsonSyntaxError, DuplicateKey, SchemaError, InvalidSpec,
            MissingField, UnknownTemplate, RangeError, ProviderUnavailable, ValueError, RecursionError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
