"""A three-valued check outcome shared by the verification reports."""

from __future__ import annotations

from dataclasses import dataclass

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check: pass, fail (with a counterexample), or
    not-applicable (with the evidence that rules the check out)."""

    status: str
    detail: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, NOT_APPLICABLE):
            raise ValueError(f"unknown verdict status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json_dict(self) -> dict:
        payload = {"status": self.status}
        if self.detail:
            payload["detail"] = self.detail
        return payload


def passed(v: Verdict) -> Verdict:
    return Verdict(PASS, v.detail) if isinstance(v, Verdict) else Verdict(PASS)


def ok() -> Verdict:
    return Verdict(PASS)


def fail(detail: str) -> Verdict:
    return Verdict(FAIL, detail)


def not_applicable(detail: str) -> Verdict:
    return Verdict(NOT_APPLICABLE, detail)
