"""Domain and problem readers for the STRIPS + typing fragment."""

from __future__ import annotations

from protokit.pddl.model import (
    ROOT_TYPE,
    ActionSchema,
    Atom,
    Domain,
    DomainMismatch,
    Literal,
    PddlTypeError,
    PredicateDecl,
    Problem,
    TypeHierarchy,
    UnknownObject,
    UnknownPredicate,
    UnsupportedRequirement,
)
from protokit.pddl.sexpr import PddlSyntaxError, SList, Token, read_one

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":negative-preconditions"})

# formula heads outside the fragment, mapped to the requirement that would enable them
_UNSUPPORTED_HEADS = {
    "or": ":disjunctive-preconditions",
    "imply": ":disjunctive-preconditions",
    "exists": ":existential-preconditions",
    "forall": ":universal-preconditions",
    "when": ":conditional-effects",
    "=": ":equality",
    "increase": ":numeric-fluents",
    "decrease": ":numeric-fluents",
    "assign": ":numeric-fluents",
    "either": ":either-types",
}

_UNSUPPORTED_SECTIONS = {
    ":functions": ":numeric-fluents",
    ":durative-action": ":durative-actions",
    ":derived": ":derived-predicates",
    ":constraints": ":constraints",
    ":metric": ":numeric-fluents",
}


def _word(x, what: str) -> str:
    if not isinstance(x, Token):
        raise PddlSyntaxError(f"expected {what}", x.line, x.col)
    return x.text


def _list(x, what: str) -> SList:
    if not isinstance(x, SList):
        raise PddlSyntaxError(f"expected {what}", x.line, x.col)
    return x


def _kw(x) -> str | None:
    return x.text.lower() if isinstance(x, Token) else None


def _typed_list(items, pos) -> list[tuple[str, str]]:
    """``a b - t c`` -> [(a, t), (b, t), (c, object)]."""
    out: list[tuple[str, str]] = []
    pending: list[str] = []
    it = iter(items)
    for x in it:
        if isinstance(x, SList):
            head = _kw(x[0]) if len(x) else None
            if head in _UNSUPPORTED_HEADS:
                raise UnsupportedRequirement(_UNSUPPORTED_HEADS[head])
            raise PddlSyntaxError("unexpected list in typed list", x.line, x.col)
        if x.text == "-":
            if not pending:
                raise PddlSyntaxError("'-' without names", x.line, x.col)
            t = next(it, None)
            if t is None:
                raise PddlSyntaxError("missing type after '-'", pos.line, pos.col)
            if isinstance(t, SList):
                head = _kw(t[0]) if len(t) else None
                if head == "either":
                    raise UnsupportedRequirement(_UNSUPPORTED_HEADS["either"])
                raise PddlSyntaxError("expected type name", t.line, t.col)
            tname = ROOT_TYPE if t.text.lower() == ROOT_TYPE else t.text
            out.extend((p, tname) for p in pending)
            pending = []
        else:
            pending.append(x.text)
    out.extend((p, ROOT_TYPE) for p in pending)
    return out


def _atom_form(x) -> tuple[str, list]:
    lst = _list(x, "atom")
    if not len(lst):
        raise PddlSyntaxError("empty atom", lst.line, lst.col)
    head = _kw(lst[0])
    if head in _UNSUPPORTED_HEADS:
        raise UnsupportedRequirement(_UNSUPPORTED_HEADS[head])
    name = _word(lst[0], "predicate name")
    return name, [_word(a, "term") for a in lst.items[1:]]


def _literals(x) -> list[tuple[bool, str, list, SList]]:
    """Flatten a conjunction into (positive, predicate, args, node) tuples."""
    lst = _list(x, "formula")
    if not len(lst):
        return []
    head = _kw(lst[0])
    if head == "and":
        out = []
        for sub in lst.items[1:]:
            out.extend(_literals(sub))
        return out
    if head == "not":
        if len(lst) != 2:
            raise PddlSyntaxError("'not' takes exactly one atom", lst.line, lst.col)
        name, args = _atom_form(lst[1])
        return [(False, name, args, lst)]
    name, args = _atom_form(lst)
    return [(True, name, args, lst)]


def _sections(body, start: int) -> list[SList]:
    out = []
    for x in body.items[start:]:
        sec = _list(x, "section")
        if not len(sec) or not isinstance(sec[0], Token):
            raise PddlSyntaxError("malformed section", sec.line, sec.col)
        out.append(sec)
    return out


def _check_args(domain_preds, name, args, node, term_type, types: TypeHierarchy):
    decl = domain_preds.get(name)
    if decl is None:
        raise UnknownPredicate(f"unknown predicate {name!r} at line {node.line}")
    if len(args) != decl.arity:
        raise PddlTypeError(
            f"predicate {name!r} expects {decl.arity} arguments, got {len(args)} (line {node.line})"
        )
    for a, (_, want) in zip(args, decl.params):
        have = term_type(a, node)
        if not types.is_subtype(have, want):
            raise PddlTypeError(
                f"argument {a!r} of type {have!r} does not fit {want!r} in {name!r} (line {node.line})"
            )


def parse_domain(text: str) -> Domain:
    root = read_one(text)
    if len(root) < 2 or _kw(root[0]) != "define":
        raise PddlSyntaxError("expected (define (domain ...) ...)", root.line, root.col)
    header = _list(root[1], "(domain NAME)")
    if len(header) != 2 or _kw(header[0]) != "domain":
        raise PddlSyntaxError("expected (domain NAME)", header.line, header.col)
    name = _word(header[1], "domain name")

    requirements: set[str] = set()
    type_pairs: list[tuple[str, str]] = []
    constants: list[tuple[str, str]] = []
    preds: list[PredicateDecl] = []
    action_forms: list[SList] = []
    for sec in _sections(root, 2):
        key = _kw(sec[0])
        if key == ":requirements":
            for r in sec.items[1:]:
                tag = _word(r, "requirement").lower()
                if tag not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedRequirement(tag)
                requirements.add(tag)
        elif key == ":types":
            type_pairs.extend(_typed_list(sec.items[1:], sec))
        elif key == ":constants":
            constants.extend(_typed_list(sec.items[1:], sec))
        elif key == ":predicates":
            for p in sec.items[1:]:
                pl = _list(p, "predicate declaration")
                pname = _word(pl[0], "predicate name") if len(pl) else None
                if pname is None:
                    raise PddlSyntaxError("empty predicate declaration", pl.line, pl.col)
                preds.append(PredicateDecl(pname, tuple(_typed_list(pl.items[1:], pl))))
        elif key == ":action":
            action_forms.append(sec)
        elif key in _UNSUPPORTED_SECTIONS:
            raise UnsupportedRequirement(_UNSUPPORTED_SECTIONS[key])
        else:
            raise PddlSyntaxError(f"unknown domain section {sec[0].text!r}", sec.line, sec.col)

    type_pairs = [(c, p) for c, p in type_pairs if c != ROOT_TYPE]
    types = TypeHierarchy(tuple(type_pairs))
    seen = set()
    for p in preds:
        if p.name in seen:
            raise PddlTypeError(f"predicate {p.name!r} declared twice")
        seen.add(p.name)
        for _, t in p.params:
            if t not in types:
                raise PddlTypeError(f"undeclared type {t!r} in predicate {p.name!r}")
    const_types = {}
    for c, t in constants:
        if t not in types:
            raise PddlTypeError(f"undeclared type {t!r} for constant {c!r}")
        const_types[c] = t
    pred_table = {p.name: p for p in preds}

    actions = []
    for form in action_forms:
        actions.append(_parse_action(form, types, pred_table, const_types))
    names = [a.name for a in actions]
    if len(set(names)) != len(names):
        raise PddlTypeError("duplicate action name")
    return Domain(
        name=name,
        requirements=frozenset(requirements),
        types=types,
        predicates=tuple(preds),
        actions=tuple(actions),
        constants=tuple(constants),
    )


def _parse_action(form: SList, types, pred_table, const_types) -> ActionSchema:
    if len(form) < 2:
        raise PddlSyntaxError("action without name", form.line, form.col)
    name = _word(form[1], "action name")
    params: list[tuple[str, str]] = []
    pre, eff = [], []
    i = 2
    items = form.items
    while i < len(items):
        key = _kw(items[i])
        if i + 1 >= len(items):
            raise PddlSyntaxError(f"missing value after {key}", form.line, form.col)
        val = items[i + 1]
        if key == ":parameters":
            params = _typed_list(_list(val, "parameter list").items, val)
        elif key == ":precondition":
            pre = _literals(val)
        elif key == ":effect":
            eff = _literals(val)
        else:
            raise PddlSyntaxError(f"unknown action field {key!r}", form.line, form.col)
        i += 2

    pvars = dict(params)
    if len(pvars) != len(params):
        raise PddlTypeError(f"duplicate parameter in action {name!r}")
    for v, t in params:
        if not v.startswith("?"):
            raise PddlSyntaxError(f"parameter {v!r} must start with '?'", form.line, form.col)
        if t not in types:
            raise PddlTypeError(f"undeclared type {t!r} in action {name!r}")

    def term_type(a, node):
        if a.startswith("?"):
            if a not in pvars:
                raise PddlTypeError(f"variable {a!r} not a parameter of {name!r} (line {node.line})")
            return pvars[a]
        if a in const_types:
            return const_types[a]
        raise UnknownObject(f"unknown constant {a!r} in action {name!r} (line {node.line})")

    precondition = []
    for positive, pname, args, node in pre:
        _check_args(pred_table, pname, args, node, term_type, types)
        precondition.append(Literal(Atom(pname, tuple(args)), positive))
    add, delete = [], []
    for positive, pname, args, node in eff:
        _check_args(pred_table, pname, args, node, term_type, types)
        (add if positive else delete).append(Atom(pname, tuple(args)))
    return ActionSchema(name, tuple(params), tuple(precondition), tuple(add), tuple(delete))


def parse_problem(text: str, domain: Domain) -> Problem:
    root = read_one(text)
    if len(root) < 2 or _kw(root[0]) != "define":
        raise PddlSyntaxError("expected (define (problem ...) ...)", root.line, root.col)
    header = _list(root[1], "(problem NAME)")
    if len(header) != 2 or _kw(header[0]) != "problem":
        raise PddlSyntaxError("expected (problem NAME)", header.line, header.col)
    name = _word(header[1], "problem name")

    domain_name = None
    objects: list[tuple[str, str]] = []
    init_forms: list = []
    goal_forms = None
    for sec in _sections(root, 2):
        key = _kw(sec[0])
        if key == ":domain":
            if len(sec) != 2:
                raise PddlSyntaxError("expected (:domain NAME)", sec.line, sec.col)
            domain_name = _word(sec[1], "domain name")
        elif key == ":requirements":
            for r in sec.items[1:]:
                tag = _word(r, "requirement").lower()
                if tag not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedRequirement(tag)
        elif key == ":objects":
            objects.extend(_typed_list(sec.items[1:], sec))
        elif key == ":init":
            init_forms.extend(sec.items[1:])
        elif key == ":goal":
            if len(sec) != 2:
                raise PddlSyntaxError("expected exactly one goal formula", sec.line, sec.col)
            goal_forms = sec[1]
        elif key in _UNSUPPORTED_SECTIONS:
            raise UnsupportedRequirement(_UNSUPPORTED_SECTIONS[key])
        else:
            raise PddlSyntaxError(f"unknown problem section {sec[0].text!r}", sec.line, sec.col)
    if domain_name is None:
        raise PddlSyntaxError("problem lacks (:domain NAME)", root.line, root.col)
    if domain_name != domain.name:
        raise DomainMismatch(f"problem is for domain {domain_name!r}, not {domain.name!r}")

    obj_types = dict(domain.constants)
    for o, t in objects:
        if t not in domain.types:
            raise PddlTypeError(f"undeclared type {t!r} for object {o!r}")
        if o in obj_types:
            raise PddlTypeError(f"object {o!r} declared twice")
        obj_types[o] = t
    pred_table = {p.name: p for p in domain.predicates}

    def term_type(a, node):
        if a not in obj_types:
            raise UnknownObject(f"unknown object {a!r} (line {node.line})")
        return obj_types[a]

    init = set()
    for f in init_forms:
        lst = _list(f, "init atom")
        if len(lst) and _kw(lst[0]) == "not":
            raise PddlSyntaxError("negative literal in :init", lst.line, lst.col)
        pname, args = _atom_form(lst)
        _check_args(pred_table, pname, args, lst, term_type, domain.types)
        init.add(Atom(pname, tuple(args)))

    goal = []
    if goal_forms is not None:
        for positive, pname, args, node in _literals(goal_forms):
            _check_args(pred_table, pname, args, node, term_type, domain.types)
            goal.append(Literal(Atom(pname, tuple(args)), positive))
    return Problem(
        name=name,
        domain_name=domain_name,
        objects=tuple(objects),
        init=frozenset(init),
        goal=tuple(goal),
    )
