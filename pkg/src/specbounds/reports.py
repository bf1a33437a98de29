"""BoundReport: one evaluated inequality instance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

RATIO_ONLY = "ratio-only"

CSV_COLUMNS = ("theorem_id", "seed", "n", "p", "tau", "lhs", "rhs_core",
               "explicit_constant", "ratio", "pass")


@dataclass(frozen=True)
class BoundReport:
    """Both sides of an inequality ``lower <= lhs <= C * rhs_core``.

    ``explicit_constant`` is ``None`` when the constant is not known in closed
    form; the report is then ratio-only and ``passed`` is ``"ratio-only"``.
    ``lower`` is an optional lower bound for two-sided statements.
    """

    theorem_id: str
    params: dict
    lhs: float
    rhs_core: float
    explicit_constant: float | None = None
    rtol: float = 0.0
    atol: float = 0.0
    lower: float | None = None
    notes: str = ""
    ratio: float = field(init=False)
    passed: object = field(init=False)

    def __post_init__(self):
        c = 1.0 if self.explicit_constant is None else self.explicit_constant
        den = c * self.rhs_core
        if den > 0:
            ratio = self.lhs / den
        else:
            ratio = 0.0 if self.lhs <= 0 else math.inf
        object.__setattr__(self, "ratio", float(ratio))
        if self.explicit_constant is None:
            passed = RATIO_ONLY
        else:
            passed = bool(self.lhs <= den * (1 + self.rtol) + self.atol)
            if self.lower is not None:
                passed = passed and bool(self.lower * (1 - self.rtol) - self.atol <= self.lhs)
        object.__setattr__(self, "passed", passed)

    @property
    def ok(self) -> bool:
        """True unless an explicit-constant check failed."""
        return self.passed is not False

    def to_row(self) -> dict:
        p = self.params
        return {
            "theorem_id": self.theorem_id,
            "seed": p.get("seed", ""),
            "n": p.get("n", ""),
            "p": p.get("p", ""),
            "tau": p.get("tau", ""),
            "lhs": repr(float(self.lhs)),
            "rhs_core": repr(float(self.rhs_core)),
            "explicit_constant": "" if self.explicit_constant is None else repr(float(self.explicit_constant)),
            "ratio": repr(float(self.ratio)),
            "pass": self.passed if isinstance(self.passed, str) else str(self.passed).lower(),
        }

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "lhs": float(self.lhs),
            "rhs_core": float(self.rhs_core),
            "explicit_constant": self.explicit_constant,
            "lower": self.lower,
            "ratio": float(self.ratio),
            "pass": self.passed,
            "notes": self.notes,
        }


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item"):
        return _plain(v.item())
    return v
