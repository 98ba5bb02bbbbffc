"""Pass-rate buckets and the final filtration pass."""

from __future__ import annotations

from collections import Counter
from enum import Enum
from fractions import Fraction


class Bucket(str, Enum):
    CHALLENGING = "Challenging"
    INTERMEDIATE = "Intermediate"
    ELEMENTARY = "Elementary"
    EXCLUDED = "Excluded"


class RangeError(ValueError):
    pass


def stratify(pass_count: int, total: int) -> Bucket:
    """Bucket for ``pass_count`` accepted trials out of ``total``.

    Rates of exactly 0 or 1 are excluded.  Intermediate covers the whole open
    interval (0.3, 0.7) so that every total gets a complete assignment.
    Comparisons use exact fractions, so 3/10 is Challenging and 7/10 Elementary.
    """
    if isinstance(pass_count, bool) or isinstance(total, bool):
        raise RangeError("counts must be integers")
    if total < 1 or not 0 <= pass_count <= total:
        raise RangeError(f"need 0 <= pass_count <= total and total >= 1, got {pass_count}/{total}")
    rate = Fraction(pass_count, total)
    if rate == 0 or rate == 1:
        return Bucket.EXCLUDED
    if rate <= Fraction(3, 10):
        return Bucket.CHALLENGING
    if rate < Fraction(7, 10):
        return Bucket.INTERMEDIATE
    return Bucket.ELEMENTARY


def filter_dataset(records) -> tuple[list, dict[str, int]]:
    """Drop Excluded records, keeping order; counts are per bucket over the input.

    Records without a bucket are counted under "Unassigned" and dropped.
    """
    kept, counts = [], Counter()
    for r in records:
        b = r.bucket if r.bucket is not None else "Unassigned"
        counts[b] += 1
        if b not in (Bucket.EXCLUDED.value, "Unassigned"):
            kept.append(r)
    return kept, {b.value: counts.get(b.value, 0) for b in Bucket} | (
        {"Unassigned": counts["Unassigned"]} if counts.get("Unassigned") else {}
    )
