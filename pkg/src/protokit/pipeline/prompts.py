"""Byte-exact prompt templates.

Templates are stored as package text files.  Substitution replaces a fixed
set of placeholder tokens per template and nothing else, so literal braces in
the template text (the example JSON object, ``{valid plan}``) survive as-is.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources


class UnknownTemplate(KeyError):
    pass


class MissingField(KeyError):
    pass


# template id -> ((placeholder token, field name), ...)
PLACEHOLDERS: dict[str, tuple[tuple[str, str], ...]] = {
    "prolog-exec": (("[Program]", "program"), ("[Query]", "query")),
    "pddl-generation": (
        ("{Specific content of the PDDL domain definition}", "pddl_domain"),
        ("{Detailed description content of the PDDL problem}", "pddl_problem"),
    ),
    "pddl-completion": (
        ("{pddl_domain}", "pddl_domain"),
        ("{pddl_problem}", "pddl_problem"),
        ("{partial_plan}", "partial_plan"),
    ),
    "pddl-reordering": (
        ("{pddl_domain}", "pddl_domain"),
        ("{pddl_problem}", "pddl_problem"),
        ("{output_of_order_plan}", "output_of_order_plan"),
    ),
    "prolog-transform": (("{prompt}", "prompt"),),
    "prolog-generalize": (),
}

TEMPLATE_IDS = tuple(PLACEHOLDERS)


@lru_cache(maxsize=None)
def template_text(template_id: str) -> str:
    if template_id not in PLACEHOLDERS:
        raise UnknownTemplate(template_id)
    return resources.files("protokit.pipeline").joinpath("templates", f"{template_id}.txt").read_text(encoding="utf-8")


def required_fields(template_id: str) -> tuple[str, ...]:
    if template_id not in PLACEHOLDERS:
        raise UnknownTemplate(template_id)
    return tuple(f for _, f in PLACEHOLDERS[template_id])


def render_prompt(template_id: str, fields: dict[str, str]) -> str:
    text = template_text(template_id)
    slots = PLACEHOLDERS[template_id]
    missing = [f for _, f in slots if f not in fields]
    if missing:
        raise MissingField(", ".join(missing))
    # split on all placeholder tokens first so that field values containing
    # placeholder-looking text are never substituted a second time
    parts = [text]
    for token, name in slots:
        nxt = []
        for p in parts:
            if isinstance(p, str):
                pieces = p.split(token)
                for i, piece in enumerate(pieces):
                    if i:
                        nxt.append((name,))
                    nxt.append(piece)
            else:
                nxt.append(p)
        parts = nxt
    return "".join(p if isinstance(p, str) else fields[p[0]] for p in parts)
