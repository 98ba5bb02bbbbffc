"""Dataset records and their JSONL form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from protokit.jsonio import DuplicateKey, JsonSyntaxError, parse_json
from protokit.pddl.plan import Plan
from protokit.pddl.tasks import plan_from_json, ref_from_json
from protokit.pddl.validate import TaskReference

BUCKETS = ("Challenging", "Intermediate", "Elementary", "Excluded")
TASK_KINDS = ("generation", "completion", "reordering")


class SchemaError(ValueError):
    def __init__(self, line: int, field: str, message: str = "missing or invalid"):
        super().__init__(f"line {line}: field {field!r}: {message}")
        self.line = line
        self.field = field


class RecordSyntaxError(JsonSyntaxError):
    """A JSONL line that is not valid JSON; ``line`` is 1-based."""

    def __init__(self, line: int, message: str, offset: int = 0):
        ValueError.__init__(self, f"line {line}: {message}")
        self.line = line
        self.offset = offset


@dataclass
class PrologRecord:
    id: str
    program: str
    answer: object
    query: str = "solve_json."
    cot: str | None = None
    pass_rate: float | None = None
    bucket: str | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = dict(self.extra)
        out.update(id=self.id, program=self.program, query=self.query, answer=self.answer)
        _optional(out, self)
        return out


@dataclass
class PddlRecord:
    id: str
    domain: str
    problem: str
    task: dict
    cot: str | None = None
    pass_rate: float | None = None
    bucket: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.task["kind"]

    def reference(self) -> TaskReference:
        return ref_from_json(self.task)

    def source_plan(self) -> Plan | None:
        items = self.task.get("source_plan")
        return None if items is None else plan_from_json(items)

    def to_json(self) -> dict:
        out = dict(self.extra)
        out.update(id=self.id, domain=self.domain, problem=self.problem, task=self.task)
        _optional(out, self)
        return out


Record = Union[PrologRecord, PddlRecord]


def _optional(out: dict, rec) -> None:
    for name in ("cot", "pass_rate", "bucket"):
        value = getattr(rec, name)
        if value is not None:
            out[name] = value


_PROLOG_FIELDS = {"id", "program", "query", "answer", "cot", "pass_rate", "bucket"}
_PDDL_FIELDS = {"id", "domain", "problem", "task", "cot", "pass_rate", "bucket"}


def _need(obj: dict, name: str, kind, line: int):
    if name not in obj:
        raise SchemaError(line, name, "missing")
    value = obj[name]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
        raise SchemaError(line, name, "wrong type")
    return value


def _optionals(obj: dict, line: int) -> dict:
    out = {}
    cot = obj.get("cot")
    if cot is not None and not isinstance(cot, str):
        raise SchemaError(line, "cot", "must be text")
    rate = obj.get("pass_rate")
    if rate is not None:
        if isinstance(rate, bool) or not isinstance(rate, (int, float)) or not 0 <= rate <= 1:
            raise SchemaError(line, "pass_rate", "must be a number in [0, 1]")
    bucket = obj.get("bucket")
    if bucket is not None and bucket not in BUCKETS:
        raise SchemaError(line, "bucket", f"must be one of {', '.join(BUCKETS)}")
    out.update(cot=cot, pass_rate=rate, bucket=bucket)
    return out


def record_from_json(obj, line: int = 0) -> Record:
    if not isinstance(obj, dict):
        raise SchemaError(line, "<record>", "each line must be a JSON object")
    rid = _need(obj, "id", str, line)
    if "program" in obj:
        rec = PrologRecord(
            id=rid,
            program=_need(obj, "program", str, line),
            query=_need(obj, "query", str, line),
            answer=_need(obj, "answer", None, line),
            **_optionals(obj, line),
        )
        rec.extra = {k: v for k, v in obj.items() if k not in _PROLOG_FIELDS}
        return rec
    if "domain" in obj:
        task = _need(obj, "task", dict, line)
        if task.get("kind") not in TASK_KINDS:
            raise SchemaError(line, "task.kind", f"must be one of {', '.join(TASK_KINDS)}")
        try:
            ref_from_json(task)
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(line, "task", str(e)) from None
        rec = PddlRecord(
            id=rid,
            domain=_need(obj, "domain", str, line),
            problem=_need(obj, "problem", str, line),
            task=task,
            **_optionals(obj, line),
        )
        rec.extra = {k: v for k, v in obj.items() if k not in _PDDL_FIELDS}
        return rec
    raise SchemaError(line, "program", "record has neither 'program' nor 'domain'")


def record_line(rec: Record) -> str:
    """Canonical one-line form: sorted keys, compact separators, UTF-8 text."""
    return json.dumps(rec.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def parse_jsonl(text: str) -> list[Record]:
    records = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = parse_json(line)
        except JsonSyntaxError as e:
            raise RecordSyntaxError(n, str(e), e.offset) from None
        except DuplicateKey as e:
            raise RecordSyntaxError(n, str(e)) from None
        records.append(record_from_json(obj, n))
    return records


def read_jsonl(path) -> list[Record]:
    return parse_jsonl(Path(path).read_text(encoding="utf-8"))


def dumps_jsonl(records) -> str:
    return "".join(record_line(r) + "\n" for r in records)


def write_jsonl(records, path) -> None:
    Path(path).write_text(dumps_jsonl(records), encoding="utf-8")
