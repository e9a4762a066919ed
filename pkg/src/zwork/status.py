"""Three-valued verdicts for predicates that quantify over all of Z."""

from __future__ import annotations

import enum


class Status(enum.Enum):
    TRUE = "pass"
    FALSE = "fail"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self) -> bool:
        return self is Status.TRUE

    @property
    def verdict(self) -> str:
        return self.value

    @staticmethod
    def combine(statuses) -> "Status":
        """Any failure wins, then any inconclusive."""
        statuses = list(statuses)
        if any(s is Status.FALSE for s in statuses):
            return Status.FALSE
        if any(s is Status.INCONCLUSIVE for s in statuses):
            return Status.INCONCLUSIVE
        return Status.TRUE

    @staticmethod
    def of(flag: bool) -> "Status":
        return Status.TRUE if flag else Status.FALSE
