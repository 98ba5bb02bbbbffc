from __future__ import annotations

from itertools import product

from protokit.pddl.model import ActionSchema, Atom, Domain, GroundAction, Literal, Problem


def typed_objects(domain: Domain, problem: Problem) -> dict[str, str]:
    table = dict(domain.constants)
    table.update(problem.objects)
    return table


def instantiate(schema: ActionSchema, args: tuple[str, ...]) -> GroundAction:
    if len(args) != len(schema.params):
        raise ValueError(f"{schema.name} takes {len(schema.params)} arguments, got {len(args)}")
    binding = {v: a for (v, _), a in zip(schema.params, args)}

    def sub(atom: Atom) -> Atom:
        return Atom(atom.predicate, tuple(binding.get(t, t) for t in atom.args))

    return GroundAction(
        name=schema.name,
        args=tuple(args),
        precondition=frozenset(Literal(sub(l.atom), l.positive) for l in schema.precondition),
        add=frozenset(sub(a) for a in schema.add),
        delete=frozenset(sub(a) for a in schema.delete),
    )


def ground_actions(domain: Domain, problem: Problem) -> list[GroundAction]:
    """Every type-consistent instantiation, ordered by schema name then argument names."""
    objects = typed_objects(domain, problem)
    out = []
    for schema in sorted(domain.actions, key=lambda a: a.name):
        candidates = [
            sorted(o for o, t in objects.items() if domain.types.is_subtype(t, ptype))
            for _, ptype in schema.params
        ]
        for args in product(*candidates):
            out.append(instantiate(schema, args))
    return out
