"""Record construction: answer derivation, planning records, LLM-assisted ingestion."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

from protokit.jsonio import NoBlockFound, compare, extract_fenced
from protokit.pddl.generators import GenSpec, instance_texts
from protokit.pddl.parser import parse_domain, parse_problem
from protokit.pddl.planner import SearchLimits, Solved, solve_optimal
from protokit.pddl.tasks import (
    DegeneratePlan,
    derive_completion_task,
    derive_reordering_task,
    plan_to_json,
    ref_to_json,
)
from protokit.pddl.validate import GenerationRef, verify
from protokit.pipeline.prompts import render_prompt
from protokit.pipeline.providers import TransportError
from protokit.pipeline.records import PddlRecord, PrologRecord
from protokit.prolog.engine import SolveLimits
from protokit.prolog.runner import run_solve_json
from protokit.prolog.terms import PrologError
from protokit.rng import Rng

log = logging.getLogger(__name__)


class BuildError(RuntimeError):
    pass


def limits_json(limits: SolveLimits) -> dict:
    return dataclasses.asdict(limits)


def derive_answer(program: str, limits: SolveLimits = SolveLimits()):
    """Ground-truth answer of a solve_json program; engine errors propagate."""
    return run_solve_json(program, limits)


def prolog_record(rid: str, program: str, limits: SolveLimits = SolveLimits(), **extra) -> PrologRecord:
    answer = derive_answer(program, limits)
    return PrologRecord(id=rid, program=program, answer=answer, extra={"engine_limits": limits_json(limits), **extra})


def build_prolog_records(paths, limits: SolveLimits = SolveLimits()) -> tuple[list[PrologRecord], list[tuple[str, str]]]:
    """Records for each program file; failing programs are dropped with a reason."""
    kept, dropped = [], []
    for path in sorted(Path(p) for p in paths):
        try:
            kept.append(prolog_record(path.stem, path.read_text(encoding="utf-8"), limits))
        except (PrologError, ValueError, RecursionError) as e:
            reason = f"{type(e).__name__}: {e}"
            log.warning("dropping %s: %s", path.name, reason)
            dropped.append((path.stem, reason))
    return kept, dropped


@dataclass(frozen=True)
class BuildConfig:
    seed: int = 0
    kinds: tuple[str, ...] = ("blocksworld", "logistics")
    instances: int = 3
    drop_fraction: float = 0.5
    completion_mode: str = "positional"
    size: dict = field(default_factory=dict)  # extra GenSpec fields, e.g. {"blocks": 4}
    search: SearchLimits = SearchLimits()


def build_pddl_records(config: BuildConfig) -> list[PddlRecord]:
    """Generation, completion and reordering records for freshly generated instances."""
    rng = Rng(config.seed)
    records = []
    for kind in config.kinds:
        for _ in range(config.instances):
            spec = GenSpec(kind, seed=rng.below(2**31), **config.size)
            domain_text, problem_text = instance_texts(spec)
            domain = parse_domain(domain_text)
            problem = parse_problem(problem_text, domain)
            result = solve_optimal(domain, problem, config.search)
            if not isinstance(result, Solved):
                log.warning("skipping %s: planner returned %s", problem.name, type(result).__name__)
                continue
            plan = result.plan
            source = plan_to_json(plan)
            tasks = [("generation", ref_to_json(GenerationRef(result.cost), source_plan=source))]
            try:
                cref = derive_completion_task(plan, config.drop_fraction, rng)
                tasks.append(("completion", ref_to_json(cref, source_plan=source, mode=config.completion_mode)))
            except DegeneratePlan:
                pass
            try:
                _, rref = derive_reordering_task(plan, rng)
                tasks.append(("reordering", ref_to_json(rref, source_plan=source)))
            except DegeneratePlan:
                pass
            for task_kind, task in tasks:
                rec = PddlRecord(id=f"{problem.name}-{task_kind}", domain=domain_text, problem=problem_text, task=task)
                bad = check_pddl_record(rec)
                if bad:
                    raise BuildError(f"{rec.id}: source plan rejected by its own reference: {bad}")
                records.append(rec)
    return records


def check_pddl_record(rec: PddlRecord) -> str | None:
    plan = rec.source_plan()
    if plan is None:
        return "record has no source plan"
    domain = parse_domain(rec.domain)
    problem = parse_problem(rec.problem, domain)
    v = verify(domain, problem, plan, rec.reference(), rec.task.get("mode", "positional"))
    return None if v.accept else v.reason


def check_prolog_record(rec: PrologRecord, limits: SolveLimits = SolveLimits()) -> str | None:
    try:
        got = derive_answer(rec.program, limits)
    except (PrologError, ValueError, RecursionError) as e:
        return f"{type(e).__name__}: {e}"
    diffs = compare(rec.answer, got)
    return "; ".join(map(str, diffs)) if diffs else None


def selfcheck(records, limits: SolveLimits = SolveLimits()) -> list[tuple[str, str]]:
    """(id, reason) for every record whose stored reference no longer checks out."""
    problems = []
    for rec in records:
        if isinstance(rec, PrologRecord):
            bad = check_prolog_record(rec, limits)
        else:
            try:
                bad = check_pddl_record(rec)
            except Exception as e:  # malformed PDDL in a stored record
                bad = f"{type(e).__name__}: {e}"
        if bad:
            problems.append((rec.id, bad))
    return problems


# ingestion: statement -> Prolog program via a provider, admitted only if it runs


def read_statements(directory) -> list[tuple[str, str]]:
    """One problem statement per ``*.txt`` file, in file-name order."""
    return [(p.stem, p.read_text(encoding="utf-8").strip()) for p in sorted(Path(directory).glob("*.txt"))]


def _program_from(completion: str) -> str:
    try:
        return extract_fenced(completion, "prolog")
    except NoBlockFound:
        return extract_fenced(completion, "pl")


def _admit(rid, completion, limits, extra) -> tuple[PrologRecord | None, str | None]:
    try:
        program = _program_from(completion)
    except NoBlockFound:
        return None, "no prolog block in completion"
    try:
        return prolog_record(rid, program, limits, **extra), None
    except (PrologError, ValueError, RecursionError) as e:
        return None, f"{type(e).__name__}: {e}"


def transform_prompt(statement: str) -> str:
    return render_prompt("prolog-transform", {"prompt": statement})


def generalize_prompt(statement: str, program: str) -> str:
    # single-turn transport: the earlier exchange is replayed ahead of the instruction
    return "\n\n".join([transform_prompt(statement), program.rstrip("\n"), render_prompt("prolog-generalize", {})])


def ingest(statements, provider, limits: SolveLimits = SolveLimits(), generalize: bool = True):
    """Transform (and optionally generalize) statements into verified records.

    Returns (records, dropped) where dropped lists (id, reason).
    """
    records, dropped = [], []
    for sid, text in statements:
        try:
            completion = provider.complete(transform_prompt(text))
        except TransportError as e:
            dropped.append((sid, f"transport: {e}"))
            continue
        rec, why = _admit(sid, completion, limits, {"source": "transform"})
        if rec is None:
            dropped.append((sid, why))
            continue
        records.append(rec)
        if not generalize:
            continue
        gid = f"{sid}-gen"
        try:
            completion = provider.complete(generalize_prompt(text, rec.program))
        except TransportError as e:
            dropped.append((gid, f"transport: {e}"))
            continue
        grec, why = _admit(gid, completion, limits, {"source": "generalize", "parent": sid})
        if grec is None:
            dropped.append((gid, why))
        else:
            records.append(grec)
    return records, dropped
