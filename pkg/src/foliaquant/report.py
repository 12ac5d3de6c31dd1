"""Check records shared by the verification layers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"


@dataclass
class CheckRecord:
    """Outcome of one named identity check.

    ``identity`` is a short self-describing formula for what was tested;
    ``residual`` carries the offending expression or component on failure.
    """

    name: str
    identity: str
    status: str
    residual: str | None = None
    detail: str | None = None

    def as_dict(self):
        return {
            "name": self.name,
            "identity": self.identity,
            "status": self.status,
            "residual": self.residual,
            "detail": self.detail,
        }


def worst_status(records):
    order = {FAIL: 3, INCONCLUSIVE: 2, PASS: 1, SKIPPED: 0}
    worst = SKIPPED
    for r in records:
        if order[r.status] > order[worst]:
            worst = r.status
    return worst
