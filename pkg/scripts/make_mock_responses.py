"""Write a scripted-provider directory for a JSONL dataset.

Each record gets n completions, each correct with probability p (drawn from a
seeded RNG), so `protokit dataset stratify --mock-dir DIR` runs offline.

    python3 scripts/make_mock_responses.py --in data.jsonl --out mock/ --p 0.5
"""

import argparse
import random

from protokit.pipeline import read_jsonl, reference_completion, training_prompt, write_script
from protokit.pipeline.records import PrologRecord

WRONG_JSON = '```json\n{"result": "No valid solution found"}\n```'
WRONG_PLAN = "```pddl\n```"


def script_for(rec, n, p, rng):
    right = reference_completion(rec)
    wrong = WRONG_JSON if isinstance(rec, PrologRecord) else WRONG_PLAN
    return [right if rng.random() < p else wrong for _ in range(n)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--in", dest="input", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--p", type=float, default=0.5, help="probability a completion is correct")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    records = read_jsonl(args.input)
    for rec in records:
        write_script(args.out, training_prompt(rec), script_for(rec, args.n, args.p, rng))
    print(f"wrote {len(records)} scripts to {args.out}")


if __name__ == "__main__":
    main()
