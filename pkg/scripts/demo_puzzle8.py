"""Generate a scrambled 8-puzzle, solve it optimally and validate the plan."""

import argparse

from protokit.pddl import format_problem
from protokit.pddl.generators import GenSpec, generate_instance
from protokit.pddl.planner import Solved, solve_optimal
from protokit.pddl.validate import validate_plan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--walk", type=int, default=4)
    args = ap.parse_args()

    domain, problem = generate_instance(GenSpec("npuzzle", seed=args.seed, side=3, walk=args.walk))
    print(format_problem(problem))
    res = solve_optimal(domain, problem)
    if not isinstance(res, Solved):
        raise SystemExit(f"planner returned {type(res).__name__}")
    print(res.plan.to_text())
    print(f"; cost {res.cost}, valid {validate_plan(domain, problem, res.plan).valid}")


if __name__ == "__main__":
    main()
