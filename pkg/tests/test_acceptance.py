"""Acceptance suite: one check per primary criterion, each printing PASS or FAIL.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py`` for a compact report.
"""

import itertools
import random
import re
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import (  # noqa: E402
    bfs_min_cost,
    brute_force_min_cost,
    datalog_text,
    herbrand_model,
    random_datalog,
    simulate_sequence,
)

from protokit.pddl import Plan, parse_domain, parse_problem  # noqa: E402
from protokit.pddl.generators import GenSpec, generate_instance  # noqa: E402
from protokit.pddl.planner import Solved, solve_optimal  # noqa: E402
from protokit.pddl.validate import ReorderRef, validate_plan, verify_reordering  # noqa: E402
from protokit.pipeline import (  # noqa: E402
    TEMPLATE_IDS,
    BuildConfig,
    ScriptedProvider,
    build_pddl_records,
    build_prolog_records,
    dumps_jsonl,
    evaluate_dataset,
    reference_completion,
    render_prompt,
    stratify,
    training_prompt,
    write_script,
)
from protokit.prolog import SolveLimits, format_term, solve  # noqa: E402

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

CRITERIA = []


def criterion(name, budget):
    def wrap(fn):
        CRITERIA.append((name, budget, fn))
        return fn

    return wrap


# family queries -------------------------------------------------------------


def parse_transcript(text):
    """(goal, [answer dicts]) pairs from a toplevel transcript."""
    out = []
    for block in text.strip().split("\n\n"):
        lines = block.strip().splitlines()
        goal = lines[0].removeprefix("?-").strip().rstrip(".")
        answers = []
        for line in lines[1:]:
            line = line.strip().rstrip(";.").strip()
            if line == "true":
                answers.append({})
            elif line != "false":
                answers.append(dict(part.split(" = ") for part in line.split(", ")))
        out.append((goal, answers))
    return out


@criterion("Family program queries", 1.0)
def check_family_queries():
    program = (DATA / "family.pl").read_text()
    queries = parse_transcript((DATA / "family-queries.txt").read_text())
    assert len(queries) == 5
    for goal, expected in queries:
        raw = [{k: format_term(v) for k, v in sol.items() if not k.startswith("_")} for sol in solve(program, goal)]
        distinct = []
        for sol in raw:
            if sol not in distinct:
                distinct.append(sol)
        assert distinct == expected, (goal, distinct, expected)
    return f"{len(queries)} queries, answers in listed order"


# sliding puzzle -------------------------------------------------------------


@criterion("Sliding-puzzle instances", 10.0)
def check_puzzle8():
    ref_domain = parse_domain((DATA / "puzzle8-domain.pddl").read_text())
    ref_problem = parse_problem((DATA / "puzzle8-problem.pddl").read_text(), ref_domain)
    assert [a.name for a in ref_domain.actions] == ["move"]
    assert sorted(pred.name for pred in ref_domain.predicates) == ["at", "empty", "neighbor"]
    seeds = range(5)
    for seed in seeds:
        domain, problem = generate_instance(GenSpec("npuzzle", seed=seed, side=3, walk=4))
        assert domain == ref_domain
        assert sorted(problem.objects) == sorted(ref_problem.objects)
        assert problem.goal == ref_problem.goal
        assert sum(a.predicate == "neighbor" for a in problem.init) == 24
        res = solve_optimal(domain, problem)
        assert isinstance(res, Solved)
        assert validate_plan(domain, problem, res.plan).valid
        assert res.cost == bfs_min_cost(domain, problem, 6)
        assert res.cost == brute_force_min_cost(domain, problem, 6)
    return f"{len(seeds)} four-move scrambles solved optimally and validated"


# buckets --------------------------------------------------------------------

BUCKETS = ["Excluded"] + ["Challenging"] * 3 + ["Intermediate"] * 3 + ["Elementary"] * 3 + ["Excluded"]


@criterion("Bucket table", 1.0)
def check_bucket_table():
    got = [stratify(k, 10).value for k in range(11)]
    assert got == BUCKETS, got
    return "pass counts 0..10 of 10 bucketed as tabulated"


# verifier oracle ------------------------------------------------------------


def short_plans(limit):
    """(domain, problem, plan) for small instances with 2..6 step optimal plans."""
    found = []
    for seed in itertools.count():
        for spec in (GenSpec("blocksworld", seed=seed, blocks=2 + seed % 2), GenSpec("logistics", seed=seed, packages=1 + seed % 2)):
            d, p = generate_instance(spec)
            res = solve_optimal(d, p)
            if isinstance(res, Solved) and 2 <= res.cost <= 6:
                found.append((d, p, res.plan))
        if len(found) >= limit:
            return found


@criterion("Verifier oracle", 300.0)
def check_verifier():
    plans = short_plans(50)
    perms = 0
    for d, p, plan in plans:
        ref = ReorderRef(plan.steps)
        for perm in set(itertools.permutations(plan.steps)):
            verdict = verify_reordering(d, p, Plan(perm), ref).accept
            assert verdict == simulate_sequence(d, p, [(s.name, s.args) for s in perm]), (p.name, perm)
            perms += 1
    return f"{len(plans)} plans, {perms} permutations, full agreement"


# planner oracle -------------------------------------------------------------


@criterion("Planner oracle", 300.0)
def check_planner():
    n = 0
    for seed in range(50):
        for spec in (GenSpec("blocksworld", seed=seed, blocks=2 + seed % 2), GenSpec("logistics", seed=seed, packages=1 + seed % 2)):
            d, p = generate_instance(spec)
            res = solve_optimal(d, p)
            assert isinstance(res, Solved), p.name
            assert brute_force_min_cost(d, p, res.cost) == res.cost, p.name
            n += 1
    return f"{n} instances, costs equal to exhaustive minimum"


# engine oracle --------------------------------------------------------------


@criterion("Engine oracle", 300.0)
def check_engine():
    limits = SolveLimits(max_solutions=10**9)
    programs = 200
    recursive = 0
    for seed in range(programs):
        facts, rules, arity = random_datalog(random.Random(seed))
        recursive += any(h[0] == b[-1][0] for h, b in rules)
        text = datalog_text(facts, rules)
        model = herbrand_model(facts, rules)
        for pred, k in sorted(arity.items()):
            names = [f"V{i}" for i in range(k)]
            got = {tuple(sol[v].name for v in names) for sol in solve(text, f"{pred}({', '.join(names)})", limits)}
            assert got == {args for q, args in model if q == pred}, (seed, pred)
    return f"{programs} programs ({recursive} recursive), solution sets equal"


# pipeline determinism -------------------------------------------------------


def mock_script(rec, index):
    """Ten scripted completions: a record-dependent mix of right, wrong and failed requests."""
    right = reference_completion(rec)
    wrong = "```json\n{\"wrong\": true}\n```" if rec.__class__.__name__ == "PrologRecord" else "```pddl\n```"
    passes = 1 + (index * 3) % 9
    script = [right if j < passes else wrong for j in range(10)]
    random.Random(index).shuffle(script)
    if index % 4 == 0:
        script[0] = None  # one transport failure, recovered by the retry
    return script


def pipeline_run(seed, workdir, workers):
    prolog, dropped = build_prolog_records(sorted((DATA / "programs").glob("*.pl")))
    assert not dropped
    records = prolog + build_pddl_records(BuildConfig(seed=seed, instances=2))
    mock = Path(workdir) / "mock"
    for i, rec in enumerate(records):
        write_script(mock, training_prompt(rec), mock_script(rec, i))
    evaluated = evaluate_dataset(records, ScriptedProvider(mock), n=10, retries=1, workers=workers)
    return dumps_jsonl(evaluated).encode("utf-8")


@criterion("Pipeline determinism", 60.0)
def check_pipeline():
    outs = []
    for workers in (1, 4):
        with tempfile.TemporaryDirectory() as tmp:
            outs.append(pipeline_run(11, tmp, workers))
    assert outs[0] == outs[1]
    lines = outs[0].decode().splitlines()
    assert all('"bucket"' in line for line in lines)
    return f"{len(lines)} records, identical bytes across two runs"


# prompt fidelity ------------------------------------------------------------


def golden_fields():
    f = GOLDEN / "fields"
    read = lambda name: (f / name).read_bytes().decode("utf-8")  # noqa: E731
    return {
        "program": read("program.pl"),
        "query": read("query.txt"),
        "pddl_domain": read("domain.pddl"),
        "pddl_problem": read("problem.pddl"),
        "partial_plan": read("partial_plan.txt"),
        "output_of_order_plan": read("out_of_order_plan.txt"),
        "prompt": read("prompt.txt"),
    }


@criterion("Prompt fidelity", 5.0)
def check_prompts():
    fields = golden_fields()
    for tid in TEMPLATE_IDS:
        assert render_prompt(tid, fields).encode("utf-8") == (GOLDEN / f"{tid}.txt").read_bytes(), tid
    return f"{len(TEMPLATE_IDS)} templates byte-identical to golden files"


# harness --------------------------------------------------------------------


def run_criterion(fn, budget):
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except Exception as e:  # any crash is a failed criterion, reported like the rest
        detail, ok = f"{type(e).__name__}: {e}", False
    elapsed = time.perf_counter() - start
    if ok and elapsed > budget:
        ok, detail = False, f"{detail}; took {elapsed:.2f}s, budget {budget:.0f}s"
    return ok, detail, elapsed


def _slug(name):
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")


@pytest.mark.parametrize("name,budget,fn", CRITERIA, ids=[_slug(c[0]) for c in CRITERIA])
def test_criterion(name, budget, fn, capsys):
    ok, detail, elapsed = run_criterion(fn, budget)
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail} ({elapsed:.2f}s)")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, budget, fn in CRITERIA:
        ok, detail, elapsed = run_criterion(fn, budget)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail} ({elapsed:.2f}s)")
    sys.exit(1 if failed else 0)
