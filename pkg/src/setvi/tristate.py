"""Tri-state verdicts shared by the audits."""

from __future__ import annotations

from enum import Enum


class Status(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"

    @classmethod
    def of(cls, flag: bool) -> Status:
        return cls.HOLDS if flag else cls.FAILS

    def __str__(self) -> str:
        return self.value
