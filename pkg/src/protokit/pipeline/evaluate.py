"""Pass-rate evaluation of records against a completion provider."""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from protokit.jsonio import DuplicateKey, JsonSyntaxError, NoBlockFound, canonical_dumps, compare, extract_fenced, parse_json
from protokit.pddl.parser import parse_domain, parse_problem
from protokit.pddl.plan import parse_plan
from protokit.pddl.sexpr import PddlError
from protokit.pddl.validate import verify
from protokit.pipeline.prompts import render_prompt
from protokit.pipeline.providers import ProviderUnavailable, TransportError
from protokit.pipeline.records import PddlRecord, PrologRecord
from protokit.pipeline.stratify import Bucket, stratify

log = logging.getLogger(__name__)


def _field(text: str) -> str:
    return text.rstrip("\n")


def training_prompt(record) -> str:
    """The prompt a model sees for ``record``."""
    if isinstance(record, PrologRecord):
        return render_prompt("prolog-exec", {"program": _field(record.program), "query": record.query})
    kind = record.kind
    fields = {"pddl_domain": _field(record.domain), "pddl_problem": _field(record.problem)}
    if kind == "generation":
        return render_prompt("pddl-generation", fields)
    ref = record.reference()
    if kind == "completion":
        fields["partial_plan"] = _field(ref.partial_plan().to_text())
        return render_prompt("pddl-completion", fields)
    fields["output_of_order_plan"] = "\n".join(str(s) for s in ref.actions)
    return render_prompt("pddl-reordering", fields)


def reference_completion(record) -> str:
    """A completion that the record's checker accepts (used to script mocks)."""
    if isinstance(record, PrologRecord):
        return f"```json\n{canonical_dumps(record.answer)}\n```"
    plan = record.source_plan()
    if plan is None:
        raise ValueError(f"record {record.id} has no source plan")
    return f"```pddl\n{plan.to_text().rstrip()}\n```"


@dataclass(frozen=True)
class TrialVerdict:
    accept: bool
    reason: str


@dataclass(frozen=True)
class EvalResult:
    record_id: str
    pass_count: int
    n: int
    verdicts: tuple[TrialVerdict, ...]

    @property
    def pass_rate(self) -> float:
        return self.pass_count / self.n

    @property
    def bucket(self) -> Bucket:
        return stratify(self.pass_count, self.n)


class _Checker:
    """Verifies one completion against a record's reference."""

    def __init__(self, record):
        self.record = record
        if isinstance(record, PddlRecord):
            self.domain = parse_domain(record.domain)
            self.problem = parse_problem(record.problem, self.domain)
            self.ref = record.reference()
            self.mode = record.task.get("mode", "positional")

    def __call__(self, completion: str) -> TrialVerdict:
        if isinstance(self.record, PrologRecord):
            try:
                got = parse_json(extract_fenced(completion, "json"))
            except NoBlockFound:
                return TrialVerdict(False, "no json block")
            except (JsonSyntaxError, DuplicateKey) as e:
                return TrialVerdict(False, f"bad json: {e}")
            diffs = compare(self.record.answer, got)
            if diffs:
                return TrialVerdict(False, "; ".join(map(str, diffs[:3])))
            return TrialVerdict(True, "answer matches")
        try:
            plan = parse_plan(extract_fenced(completion, "pddl"))
        except NoBlockFound:
            return TrialVerdict(False, "no pddl block")
        except PddlError as e:
            return TrialVerdict(False, f"bad plan: {e}")
        v = verify(self.domain, self.problem, plan, self.ref, self.mode)
        return TrialVerdict(v.accept, v.reason)


def evaluate_record(record, provider, n: int = 10, retries: int = 2) -> EvalResult:
    """Sample ``n`` completions and verify each locally.

    A trial whose request still fails after ``retries`` extra attempts counts
    as failed.  If no trial got any completion the provider is considered
    down and ProviderUnavailable is raised instead of reporting a rate.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    prompt = training_prompt(record)
    check = _Checker(record)
    verdicts = []
    transport_failures = 0
    for _ in range(n):
        completion = None
        for attempt in range(retries + 1):
            try:
                completion = provider.complete(prompt)
                break
            except TransportError as e:
                log.info("record %s: transport error (attempt %d): %s", record.id, attempt + 1, e)
        if completion is None:
            transport_failures += 1
            verdicts.append(TrialVerdict(False, "transport failure"))
        else:
            verdicts.append(check(completion))
    if transport_failures == n:
        raise ProviderUnavailable(f"record {record.id}: provider returned no completion in {n} trials")
    passed = sum(v.accept for v in verdicts)
    return EvalResult(record.id, passed, n, tuple(verdicts))


def evaluate_dataset(records, provider, n: int = 10, retries: int = 2, workers: int = 1) -> list:
    """Evaluate and stratify every record; returns updated copies in input order."""

    def one(rec):
        res = evaluate_record(rec, provider, n, retries)
        return dataclasses.replace(rec, pass_rate=res.pass_rate, bucket=res.bucket.value)

    if workers <= 1:
        return [one(r) for r in records]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, records))
