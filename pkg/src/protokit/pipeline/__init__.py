"""Dataset construction, pass-rate stratification and prompt rendering."""

from protokit.pipeline.build import (
    BuildConfig,
    build_pddl_records,
    build_prolog_records,
    derive_answer,
    ingest,
    read_statements,
    selfcheck,
)
from protokit.pipeline.evaluate import (
    EvalResult,
    TrialVerdict,
    evaluate_dataset,
    evaluate_record,
    reference_completion,
    training_prompt,
)
from protokit.pipeline.prompts import TEMPLATE_IDS, MissingField, UnknownTemplate, render_prompt
from protokit.pipeline.providers import (
    CallableProvider,
    HttpProvider,
    ProviderUnavailable,
    ScriptedProvider,
    TransportError,
    write_script,
)
from protokit.pipeline.records import (
    PddlRecord,
    PrologRecord,
    RecordSyntaxError,
    SchemaError,
    dumps_jsonl,
    read_jsonl,
    write_jsonl,
)
from protokit.pipeline.stratify import Bucket, RangeError, filter_dataset, stratify
