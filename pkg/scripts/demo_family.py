"""Run the family program against the recorded toplevel queries, printing every raw answer."""

from pathlib import Path

from protokit.prolog import format_term, solve

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"



def main():
    program = (DATA / "family.pl").read_text()
    lines = (DATA / "family-queries.txt").read_text().splitlines()
    goals = [line[2:].strip().rstrip(".") for line in lines if line.startswith("?-")]
    for goal in goals:
        print(f"?- {goal}.")
        sols = list(solve(program, goal))
        for sol in sols:
            shown = [f"{k} = {format_term(v)}" for k, v in sol.items() if not k.startswith("_")]
            print("   " + (", ".join(shown) or "true"))
        if not sols:
            print("   false")
        print()


if __name__ == "__main__":
    main()
