"""Seeded instance generators for BlocksWorld, Logistics and the sliding-tile puzzle.

Goals are reached by a random walk from the initial state, so every instance
is solvable by construction.  Output depends only on the ``GenSpec``.
"""

from __future__ import annotations

from dataclasses import dataclass

from protokit.pddl.grounding import ground_actions
from protokit.pddl.model import Atom, Domain, Literal, PddlError, Problem
from protokit.pddl.parser import parse_domain
from protokit.pddl.printer import format_domain, format_problem
from protokit.pddl.validate import holds
from protokit.rng import MASK64, Rng

BLOCKSWORLD_DOMAIN = """\
(define (domain blocksworld)
  (:requirements :strips)
  (:predicates (clear ?x) (ontable ?x) (handempty) (holding ?x) (on ?x ?y))
  (:action pick-up
    :parameters (?x)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action put-down
    :parameters (?x)
    :precondition (holding ?x)
    :effect (and (clear ?x) (handempty) (ontable ?x) (not (holding ?x))))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (clear ?x) (handempty) (on ?x ?y) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty)))))
"""

LOGISTICS_DOMAIN = """\
(define (domain logistics)
  (:requirements :strips :typing)
  (:types truck airplane - vehicle
          package vehicle - physobj
          airport location - place
          city place physobj - object)
  (:predicates (in-city ?loc - place ?city - city)
               (at ?obj - physobj ?loc - place)
               (in ?pkg - package ?veh - vehicle))
  (:action load-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (at ?pkg ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?truck)))
  (:action load-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (at ?pkg ?loc) (at ?airplane ?loc))
    :effect (and (not (at ?pkg ?loc)) (in ?pkg ?airplane)))
  (:action unload-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (in ?pkg ?truck))
    :effect (and (not (in ?pkg ?truck)) (at ?pkg ?loc)))
  (:action unload-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (in ?pkg ?airplane) (at ?airplane ?loc))
    :effect (and (not (in ?pkg ?airplane)) (at ?pkg ?loc)))
  (:action drive-truck
    :parameters (?truck - truck ?loc-from - place ?loc-to - place ?city - city)
    :precondition (and (at ?truck ?loc-from) (in-city ?loc-from ?city) (in-city ?loc-to ?city))
    :effect (and (not (at ?truck ?loc-from)) (at ?truck ?loc-to)))
  (:action fly-airplane
    :parameters (?airplane - airplane ?loc-from - airport ?loc-to - airport)
    :precondition (at ?airplane ?loc-from)
    :effect (and (not (at ?airplane ?loc-from)) (at ?airplane ?loc-to))))
"""

NPUZZLE_DOMAIN = """\
(define (domain n-puzzle-typed)
  (:requirements :typing)
  (:types position tile)
  (:predicates
    (at ?tile - tile ?position - position)
    (neighbor ?p1 - position ?p2 - position)
    (empty ?position - position))

  (:action move
    :parameters (?tile - tile
                 ?from ?to - position)
    :precondition
      (and (neighbor ?from ?to)
           (at ?tile ?from)
           (empty ?to))
    :effect
      (and (at ?tile ?to)
           (empty ?from)
           (not (at ?tile ?from))
           (not (empty ?to)))))
"""

KINDS = ("blocksworld", "logistics", "npuzzle")


class InvalidSpec(PddlError):
    pass


@dataclass(frozen=True)
class GenSpec:
    kind: str
    seed: int = 0
    blocks: int = 3
    cities: int = 2
    locations: int = 2  # per city, the first one being the airport
    trucks: int | None = None  # defaults to one per city
    airplanes: int = 1
    packages: int = 2
    side: int = 3
    walk: int | None = None  # random-walk length used to place the goal

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown domain kind {self.kind!r}")
        sizes = [self.blocks, self.cities, self.locations, self.airplanes, self.packages, self.side]
        if self.trucks is not None:
            sizes.append(self.trucks)
        if any(s < 1 for s in sizes):
            raise InvalidSpec("all sizes must be >= 1")
        if self.kind == "npuzzle" and self.side not in (2, 3):
            raise InvalidSpec("npuzzle side must be 2 or 3")
        if self.walk is not None and self.walk < 0:
            raise InvalidSpec("walk length must be >= 0")

    @property
    def walk_length(self) -> int:
        if self.walk is not None:
            return self.walk
        return {"blocksworld": 2 * self.blocks, "logistics": 2 * self.packages + 2, "npuzzle": 4}[self.kind]


_DOMAIN_CACHE: dict[str, Domain] = {}


def domain_for(kind: str) -> Domain:
    if kind not in _DOMAIN_CACHE:
        text = {"blocksworld": BLOCKSWORLD_DOMAIN, "logistics": LOGISTICS_DOMAIN, "npuzzle": NPUZZLE_DOMAIN}[kind]
        _DOMAIN_CACHE[kind] = parse_domain(text)
    return _DOMAIN_CACHE[kind]


def _random_walk(domain: Domain, problem: Problem, state: frozenset, length: int, rng: Rng, prev=None):
    """Walk ``length`` steps, never stepping back to the previous state when avoidable.

    Returns (final state, state before it) so a walk can be resumed.
    """
    actions = ground_actions(domain, problem)
    for _ in range(length):
        moves = []
        for act in actions:
            if all(holds(state, l) for l in act.precondition):
                nxt = (state - act.delete) | act.add
                if nxt != state:
                    moves.append(nxt)
        if not moves:
            break
        fresh = [m for m in moves if m != prev]
        prev, state = state, rng.choice(fresh or moves)
    return state, prev


MAX_EXTRA_STEPS = 50


def _walk_to_goal(domain, skeleton, length, rng, goal_of):
    """Goal read off a random walk from init, extended step by step while it already holds in init.

    With length 0, or when no other goal is reachable (a single block), the
    last goal read is returned even if it is trivially satisfied.
    """
    state, prev = _random_walk(domain, skeleton, skeleton.init, length, rng)
    goal = goal_of(state)
    for _ in range(MAX_EXTRA_STEPS if length else 0):
        if not all(l.atom in skeleton.init for l in goal):
            break
        state, prev = _random_walk(domain, skeleton, state, 1, rng, prev)
        goal = goal_of(state)
    return goal


def _blocksworld(spec: GenSpec, rng: Rng) -> Problem:
    domain = domain_for("blocksworld")
    blocks = [f"b{i}" for i in range(1, spec.blocks + 1)]
    order = list(blocks)
    rng.shuffle(order)
    towers: list[list[str]] = []
    for b in order:
        k = rng.below(len(towers) + 1)
        if k == len(towers):
            towers.append([b])
        else:
            towers[k].append(b)
    init = {Atom("handempty")}
    for t in towers:
        init.add(Atom("ontable", (t[0],)))
        init.update(Atom("on", (up, down)) for down, up in zip(t, t[1:]))
        init.add(Atom("clear", (t[-1],)))
    skeleton = Problem(f"blocksworld-{spec.seed}", domain.name, tuple((b, "object") for b in blocks), frozenset(init))

    def goal_of(state):
        held = [a for a in state if a.predicate == "holding"]
        for a in held:
            b = a.args[0]
            state = (state - {a}) | {Atom("ontable", (b,)), Atom("clear", (b,)), Atom("handempty")}
        return tuple(Literal(a) for a in sorted(state) if a.predicate in ("on", "ontable"))

    goal = _walk_to_goal(domain, skeleton, spec.walk_length, rng, goal_of)
    return Problem(skeleton.name, domain.name, skeleton.objects, skeleton.init, goal)


def _logistics(spec: GenSpec, rng: Rng) -> Problem:
    domain = domain_for("logistics")
    ntrucks = spec.cities if spec.trucks is None else spec.trucks
    objects: list[tuple[str, str]] = []
    init = set()
    airports, places_of = [], {}
    for c in range(1, spec.cities + 1):
        city = f"city{c}"
        objects.append((city, "city"))
        places = [f"apt{c}"] + [f"loc{c}-{j}" for j in range(2, spec.locations + 1)]
        objects.append((places[0], "airport"))
        objects.extend((p, "location") for p in places[1:])
        init.update(Atom("in-city", (p, city)) for p in places)
        airports.append(places[0])
        places_of[c] = places
    all_places = [p for c in sorted(places_of) for p in places_of[c]]
    for t in range(1, ntrucks + 1):
        truck = f"truck{t}"
        objects.append((truck, "truck"))
        init.add(Atom("at", (truck, rng.choice(places_of[(t - 1) % spec.cities + 1]))))
    for a in range(1, spec.airplanes + 1):
        plane = f"plane{a}"
        objects.append((plane, "airplane"))
        init.add(Atom("at", (plane, rng.choice(airports))))
    packages = [f"pkg{p}" for p in range(1, spec.packages + 1)]
    for p in packages:
        objects.append((p, "package"))
        init.add(Atom("at", (p, rng.choice(all_places))))
    skeleton = Problem(f"logistics-{spec.seed}", domain.name, tuple(objects), frozenset(init))

    def goal_of(state):
        # packages still inside a vehicle are unloaded where the vehicle stands
        where = {a.args[0]: a.args[1] for a in state if a.predicate == "at"}
        for a in sorted(x for x in state if x.predicate == "in"):
            pkg, veh = a.args
            state = (state - {a}) | {Atom("at", (pkg, where[veh]))}
        return tuple(Literal(a) for a in sorted(state) if a.predicate == "at" and a.args[0] in packages)

    goal = _walk_to_goal(domain, skeleton, spec.walk_length, rng, goal_of)
    return Problem(skeleton.name, domain.name, skeleton.objects, skeleton.init, goal)


def _npuzzle(spec: GenSpec, rng: Rng) -> Problem:
    domain = domain_for("npuzzle")
    n = spec.side
    cells = [(r, c) for r in range(1, n + 1) for c in range(1, n + 1)]
    pos = {rc: f"p_{rc[0]}_{rc[1]}" for rc in cells}
    tiles = [f"t_{k}" for k in range(1, n * n)]
    objects = tuple((pos[rc], "position") for rc in cells) + tuple((t, "tile") for t in tiles)
    neighbors = set()
    for r, c in cells:
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            if (r + dr, c + dc) in pos:
                neighbors.add(Atom("neighbor", (pos[(r, c)], pos[(r + dr, c + dc)])))
    solved = {Atom("at", (t, pos[cells[k]])) for k, t in enumerate(tiles)} | {Atom("empty", (pos[cells[-1]],))}
    skeleton = Problem(f"npuzzle-{spec.seed}", domain.name, objects, frozenset(solved | neighbors))
    # scramble backwards from the solved board; moves are reversible so the board is reachable
    scrambled, _ = _random_walk(domain, skeleton, skeleton.init, spec.walk_length, rng)
    goal = tuple(Literal(Atom("at", (t, pos[cells[k]]))) for k, t in enumerate(tiles))
    return Problem(skeleton.name, domain.name, objects, scrambled, goal)


def generate_instance(spec: GenSpec) -> tuple[Domain, Problem]:
    spec.validate()
    rng = Rng(spec.seed & MASK64)
    build = {"blocksworld": _blocksworld, "logistics": _logistics, "npuzzle": _npuzzle}[spec.kind]
    return domain_for(spec.kind), build(spec, rng)


def instance_texts(spec: GenSpec) -> tuple[str, str]:
    domain, problem = generate_instance(spec)
    return format_domain(domain), format_problem(problem, typed=":typing" in domain.requirements)


def instance_filenames(spec: GenSpec) -> tuple[str, str]:
    return f"{spec.kind}-{spec.seed}-domain.pddl", f"{spec.kind}-{spec.seed}-problem.pddl"
