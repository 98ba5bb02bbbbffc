"""SLD resolution with chronological backtracking.

The machine is iterative: a goal continuation (linked frames) plus an explicit
choicepoint stack, with variables bound in place and undone from a trail.
Deep recursion in the object program therefore never touches the Python stack
(nested ``findall`` runs are the exception, one Python frame per nesting level).
"""

from __future__ import annotations

from dataclasses import dataclass

from protokit.prolog import builtins as bi
from protokit.prolog.reader import Program, conjuncts, parse_program, parse_term
from protokit.prolog.terms import (
    Atom,
    Compound,
    PrologError,
    Var,
    deref,
    is_callable,
    make_list,
    rename_apart,
    resolve,
    term_vars,
)


class ResourceLimit(PrologError):
    pass


class StepLimitExceeded(ResourceLimit):
    pass


class DepthLimitExceeded(ResourceLimit):
    pass


class UnknownPredicate(PrologError):
    def __init__(self, name: str, arity: int):
        super().__init__(f"unknown procedure {name}/{arity}")
        self.indicator = (name, arity)


class UnsupportedBuiltin(PrologError):
    def __init__(self, name: str, arity: int):
        super().__init__(f"builtin {name}/{arity} is outside the supported subset")
        self.indicator = (name, arity)


class InstantiationError(PrologError):
    pass


@dataclass(frozen=True)
class SolveLimits:
    max_steps: int = 10_000_000
    max_depth: int = 10_000
    max_solutions: int = 10_000

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_depth <= 0 or self.max_solutions <= 0:
            raise ValueError("solve limits must be positive")


# library predicates written in Prolog; used only when the program does not define them
LIBRARY = """
member(X, [X|_]).
member(X, [_|T]) :- member(X, T).
append([], L, L).
append([H|T], L, [H|R]) :- append(T, L, R).
"""

# names of common SWI predicates outside the subset, reported as unsupported rather than unknown
KNOWN_UNSUPPORTED = frozenset("""
    write writeln print write_canonical writeq format nl tab halt
    assert asserta assertz retract retractall abolish dynamic discontiguous
    catch throw once ignore not forall setof bagof aggregate_all
    maplist foldl include exclude partition sum_list sumlist max_list min_list
    max_member min_member last list_to_set subtract intersection union delete
    select selectchk permutation numlist nb_getval b_getval nb_setval b_setval
    functor arg =.. copy_term keysort predsort succ plus
    atom_length atom_chars char_code atom_number atom_string atom_to_term term_to_atom
    string_concat string_chars string_codes string_to_atom string_length number_string
    sub_atom sub_string atomic_list_concat split_string upcase_atom downcase_atom atom_concat
    ground callable is_list compound atomic string is_dict
    initialization set_prolog_flag dif freeze table numbervars read_term read
    json_read json_read_dict atom_json_term atom_json_dict json_write_dict with_output_to
    format_atom nb_current char_type code_type term_variables setarg nb_setarg apply
    clause current_op op garbage_collect
""".split())


class _Fail:
    pass


FAIL = _Fail()


class _CutTo:
    __slots__ = ("height",)

    def __init__(self, height: int):
        self.height = height


class _Alt:
    """Choicepoint resuming a stored continuation."""

    __slots__ = ("trail", "cont")

    def __init__(self, trail: int, cont):
        self.trail = trail
        self.cont = cont


class _ClauseAlt:
    __slots__ = ("trail", "goal", "clauses", "index", "depth", "cont")

    def __init__(self, trail, goal, clauses, index, depth, cont):
        self.trail = trail
        self.goal = goal
        self.clauses = clauses
        self.index = index
        self.depth = depth
        self.cont = cont


class _GenAlt:
    __slots__ = ("trail", "gen", "cont")

    def __init__(self, trail, gen, cont):
        self.trail = trail
        self.gen = gen
        self.cont = cont


def _first_arg_key(t):
    t = deref(t)
    if type(t) is Var:
        return None
    if type(t) is Compound:
        return ("f", t.functor, len(t.args))
    if type(t) is Atom:
        return ("a", t.name)
    return ("n", type(t).__name__, t)


class _StoredClause:
    __slots__ = ("head", "body", "key")

    def __init__(self, head, body):
        self.head = head
        self.body = body
        self.key = _first_arg_key(head.args[0]) if type(head) is Compound else None


def _rename(t, mapping: dict):
    t = deref(t)
    tt = type(t)
    if tt is Var:
        v = mapping.get(t.id)
        if v is None:
            v = mapping[t.id] = Var(t.name)
        return v
    if tt is Compound:
        return Compound(t.functor, tuple([_rename(a, mapping) for a in t.args]))
    return t


class Engine:
    def __init__(self, program: Program | str, limits: SolveLimits = SolveLimits(), occurs_check: bool = False):
        if isinstance(program, str):
            program = parse_program(program)
        self.program = program
        self.limits = limits
        self.occurs_check = occurs_check
        self.trail: list[Var] = []
        self.steps = 0
        self.output: list[str] = []
        self.db: dict[tuple[str, int], list[_StoredClause]] = {}
        for c in program.clauses:
            self.db.setdefault(_key(c.head), []).append(_StoredClause(c.head, c.body))
        self.library: dict[tuple[str, int], list[_StoredClause]] = {}
        for c in _library_program().clauses:
            self.library.setdefault(_key(c.head), []).append(_StoredClause(c.head, c.body))

    # bindings ---------------------------------------------------------------

    def bind(self, v: Var, value) -> None:
        v.ref = value
        self.trail.append(v)

    def undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            trail.pop().ref = None

    def unify(self, a, b) -> bool:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x, y = deref(x), deref(y)
            if x is y:
                continue
            tx, ty = type(x), type(y)
            if tx is Var:
                if self.occurs_check and ty is Compound and _occurs(x, y):
                    return False
                self.bind(x, y)
            elif ty is Var:
                if self.occurs_check and tx is Compound and _occurs(y, x):
                    return False
                self.bind(y, x)
            elif tx is Compound:
                if ty is not Compound or x.functor != y.functor or len(x.args) != len(y.args):
                    return False
                stack.extend(zip(x.args, y.args))
            elif tx is not ty or x != y:
                return False
        return True

    # public API -------------------------------------------------------------

    def solve(self, goal, max_solutions: int | None = None):
        """Yield one {name: term} dict per solution of ``goal`` (text or term)."""
        if isinstance(goal, str):
            goal, names = parse_term(goal)
        else:
            names = {}
            for v in term_vars(goal):
                if v.name != "_":
                    names.setdefault(v.name, v)
        cap = self.limits.max_solutions if max_solutions is None else max_solutions
        found = 0
        for _ in self._run(goal, 0):
            yield {n: resolve(v) for n, v in names.items() if n != "_"}
            found += 1
            if found >= cap:
                return

    def once(self, goal) -> bool:
        for _ in self._run(goal, 0):
            return True
        return False

    # machine ----------------------------------------------------------------

    def _lookup(self, key):
        clauses = self.db.get(key)
        if clauses is None:
            clauses = self.library.get(key)
        if clauses is None:
            name, arity = key
            if name in KNOWN_UNSUPPORTED or key in bi.OUT_OF_SUBSET:
                raise UnsupportedBuiltin(name, arity)
            raise UnknownPredicate(name, arity)
        return clauses

    @staticmethod
    def _next_candidate(clauses, start, akey):
        for i in range(start, len(clauses)):
            k = clauses[i].key
            if akey is None or k is None or k == akey:
                return i
        return -1

    def _try_clause(self, stack, goal, clauses, i, depth, cont, akey):
        """Unify ``goal`` with clause ``i``; push an alternative if more candidates follow."""
        height = len(stack)
        j = self._next_candidate(clauses, i + 1, akey)
        if j >= 0:
            stack.append(_ClauseAlt(len(self.trail), goal, clauses, j, depth, cont))
        c = clauses[i]
        mapping = {}
        head = _rename(c.head, mapping)
        if not self.unify(head, goal):
            return FAIL
        for g in reversed(c.body):
            cont = (_rename(g, mapping), height, depth + 1, cont)
        return cont

    def _backtrack(self, stack):
        while stack:
            cp = stack[-1]
            self.undo(cp.trail)
            if type(cp) is _Alt:
                stack.pop()
                return cp.cont
            if type(cp) is _ClauseAlt:
                stack.pop()
                akey = _first_arg_key(cp.goal.args[0]) if type(cp.goal) is Compound else None
                cont = self._try_clause(stack, cp.goal, cp.clauses, cp.index, cp.depth, cp.cont, akey)
                if cont is not FAIL:
                    return cont
                continue
            # generator-backed builtin
            try:
                next(cp.gen)
                return cp.cont
            except StopIteration:
                stack.pop()
        return FAIL

    def _run(self, goal, depth: int):
        mark = len(self.trail)
        stack: list = []
        cont = (goal, 0, depth, None)
        max_steps, max_depth = self.limits.max_steps, self.limits.max_depth
        while True:
            if cont is None:
                yield True
                cont = self._backtrack(stack)
                if cont is FAIL:
                    self.undo(mark)
                    return
                continue
            if cont is FAIL:
                cont = self._backtrack(stack)
                if cont is FAIL:
                    self.undo(mark)
                    return
                continue
            goal, cutb, d, nxt = cont
            if type(goal) is _CutTo:
                del stack[goal.height:]
                cont = nxt
                continue
            self.steps += 1
            if self.steps > max_steps:
                raise StepLimitExceeded(f"more than {max_steps} inference steps")
            if d > max_depth:
                raise DepthLimitExceeded(f"call depth exceeded {max_depth}")
            goal = deref(goal)
            tg = type(goal)
            if tg is Atom:
                name, args = goal.name, ()
            elif tg is Compound:
                name, args = goal.functor, goal.args
            elif tg is Var:
                raise InstantiationError("goal is unbound")
            else:
                raise bi.PrologTypeError(f"callable expected, got {goal!r}")
            arity = len(args)

            # control constructs
            if arity == 0:
                if name == "true":
                    cont = nxt
                    continue
                if name in ("fail", "false"):
                    cont = FAIL
                    continue
                if name == "!":
                    del stack[cutb:]
                    cont = nxt
                    continue
            elif arity == 2:
                if name == ",":
                    cont = (args[0], cutb, d, (args[1], cutb, d, nxt))
                    continue
                if name == ";":
                    left = deref(args[0])
                    if type(left) is Compound and left.functor == "->" and len(left.args) == 2:
                        h = len(stack)
                        stack.append(_Alt(len(self.trail), (args[1], cutb, d, nxt)))
                        cont = (left.args[0], h + 1, d + 1, (_CutTo(h), cutb, d, (left.args[1], cutb, d, nxt)))
                        continue
                    stack.append(_Alt(len(self.trail), (args[1], cutb, d, nxt)))
                    cont = (left, cutb, d, nxt)
                    continue
                if name == "->":
                    h = len(stack)
                    stack.append(_Alt(len(self.trail), FAIL))
                    cont = (args[0], h + 1, d + 1, (_CutTo(h), cutb, d, (args[1], cutb, d, nxt)))
                    continue
            elif arity == 1:
                if name == "\\+":
                    h = len(stack)
                    stack.append(_Alt(len(self.trail), nxt))
                    cont = (args[0], h + 1, d + 1, (_CutTo(h), cutb, d, (Atom("fail"), cutb, d, None)))
                    continue
                if name == "call":
                    inner = deref(args[0])
                    if type(inner) is Var:
                        raise InstantiationError("call/1: goal is unbound")
                    if not is_callable(inner):
                        raise bi.PrologTypeError(f"call/1: callable expected, got {inner!r}")
                    cont = (inner, len(stack), d + 1, nxt)
                    continue
            if arity == 3 and name == "findall":
                # copies are renamed apart so unbound variables in answers are fresh
                results = [rename_apart(args[0]) for _ in self._run_copy(args[0], args[1], d + 1)]
                cont = nxt if self.unify(args[2], make_list(results)) else FAIL
                continue

            key = (name, arity)
            det = bi.DETERMINISTIC.get(key)
            if det is not None:
                cont = nxt if det(self, *args) else FAIL
                continue
            nondet = bi.NONDETERMINISTIC.get(key)
            if nondet is not None:
                gen = nondet(self, *args)
                cp = _GenAlt(len(self.trail), gen, nxt)
                stack.append(cp)
                try:
                    next(gen)
                    cont = nxt
                except StopIteration:
                    stack.pop()
                    cont = FAIL
                continue

            clauses = self._lookup(key)
            akey = _first_arg_key(args[0]) if arity else None
            i = self._next_candidate(clauses, 0, akey)
            if i < 0:
                cont = FAIL
                continue
            cont = self._try_clause(stack, goal, clauses, i, d, nxt, akey)

    def _run_copy(self, template, goal, depth):
        """Solutions of ``goal`` for findall; the caller copies ``template`` at each yield."""
        goal = deref(goal)
        if type(goal) is Var:
            raise InstantiationError("findall/3: goal is unbound")
        if not is_callable(goal):
            raise bi.PrologTypeError(f"findall/3: callable expected, got {goal!r}")
        return self._run(goal, depth)


def _occurs(v: Var, t) -> bool:
    stack = [t]
    while stack:
        x = deref(stack.pop())
        if x is v:
            return True
        if type(x) is Compound:
            stack.extend(x.args)
    return False


def _key(head) -> tuple[str, int]:
    head = deref(head)
    if type(head) is Atom:
        return (head.name, 0)
    return (head.functor, len(head.args))


_LIBRARY_CACHE: list = []


def _library_program() -> Program:
    if not _LIBRARY_CACHE:
        _LIBRARY_CACHE.append(parse_program(LIBRARY))
    return _LIBRARY_CACHE[0]


def solve(program: Program | str, goal, limits: SolveLimits = SolveLimits(), occurs_check: bool = False):
    """Lazily enumerate solutions of ``goal`` against ``program`` in SLD order."""
    engine = Engine(program, limits, occurs_check)
    yield from engine.solve(goal)


def unify(a, b, subst: dict | None = None, occurs_check: bool = False) -> dict | None:
    """Most general unifier of ``a`` and ``b`` extending ``subst``, or None.

    Functional counterpart of ``Engine.unify``: the substitution is a dict
    from Var to term and no variable cell is mutated.
    """
    s = dict(subst or {})

    def walk(t):
        t = deref(t)
        while type(t) is Var and t in s:
            t = deref(s[t])
        return t

    def occurs(v, t):
        stack = [t]
        while stack:
            x = walk(stack.pop())
            if x is v:
                return True
            if type(x) is Compound:
                stack.extend(x.args)
        return False

    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = walk(x), walk(y)
        if x is y:
            continue
        if type(x) is Var or type(y) is Var:
            v, t = (x, y) if type(x) is Var else (y, x)
            if occurs_check and occurs(v, t):
                return None
            s[v] = t
        elif type(x) is Compound:
            if type(y) is not Compound or x.functor != y.functor or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
        elif type(x) is not type(y) or x != y:
            return None
    return s


def substitute(t, subst: dict):
    """Apply ``subst`` fully to ``t`` (assumes no cyclic bindings)."""
    t = deref(t)
    while type(t) is Var and t in subst:
        t = deref(subst[t])
    if type(t) is Compound:
        return Compound(t.functor, tuple(substitute(x, subst) for x in t.args))
    return t
