"""Common result type for the three CHSH-type tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

LOCAL_BOUND = 2.0
TSIRELSON_BOUND = 2 * math.sqrt(2)


@dataclass(frozen=True)
class BellResult:
    test: str
    value: float
    parameters: dict[str, Any] = field(default_factory=dict)
    violated: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "violated", abs(self.value) > LOCAL_BOUND)


def chsh(corr: Callable[[float, float], float], a1: float, a2: float, b1: float, b2: float) -> float:
    """``E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)``."""
    return corr(a1, b1) + corr(a1, b2) + corr(a2, b1) - corr(a2, b2)
