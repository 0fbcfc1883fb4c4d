"""Evaluate one sentence across two indexed families of finite structures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from ..errors import SignatureError
from ..structures import FiniteStructure
from .evaluator import check_signature, evaluate
from .syntax import Formula

__all__ = ["SeparationReport", "separation_report"]

Family = Callable[[int], Optional[FiniteStructure]]


@dataclass
class SeparationReport:
    """Rows are (index, holds in family A, holds in family B); None marks an absent member.

    ``separates`` is true when the sentence holds on every sampled member of A
    and fails on every sampled member of B.  ``first_failure`` is the least
    index where that pattern breaks.
    """

    rows: list[tuple[int, Optional[bool], Optional[bool]]] = field(default_factory=list)
    separates: bool = True
    first_failure: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "rows": [list(r) for r in self.rows],
            "separates": self.separates,
            "first_failure": self.first_failure,
        }


def separation_report(
    f: Formula, family_a: Family, family_b: Family, indices: int | Iterable[int]
) -> SeparationReport:
    """Evaluate ``f`` on ``family_a(i)`` and ``family_b(i)``.

    ``indices`` is either an explicit iterable or a maximum index (then
    ``0..indices`` are sampled).  A family returns None for indices it does not
    cover.
    """
    idx = range(indices + 1) if isinstance(indices, int) else indices
    report = SeparationReport()
    for i in idx:
        values = []
        for fam in (family_a, family_b):
            s = fam(i)
            if s is None:
                values.append(None)
                continue
            try:
                check_signature(f, s)
            except SignatureError as exc:
                raise SignatureError(f"index {i}: {exc}") from None
            values.append(evaluate(f, s))
        a, b = values
        if a is None and b is None:
            continue
        report.rows.append((i, a, b))
        if a is False or b is True:
            report.separates = False
            if report.first_failure is None:
                report.first_failure = i
    return report
