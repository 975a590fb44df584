"""Monte Carlo bookkeeping: point estimates with Wilson intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


def wilson95(successes: int, trials: int) -> tuple[float, float]:
    """Wilson score 95% interval; [0, 1] when there are no trials."""
    if trials == 0:
        return (0.0, 1.0)
    z = 1.959963984540054
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = phat + z * z / (2 * trials)
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials ** 2))
    return ((centre - half) / denom, (centre + half) / denom)


@dataclass
class MCEstimate:
    successes: int
    trials: int
    master_seed: int
    metadata: dict = field(default_factory=dict)

    @property
    def point(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def wilson(self) -> tuple[float, float]:
        return wilson95(self.successes, self.trials)

    @property
    def stderr(self) -> float:
        if self.trials == 0:
            return 0.0
        p = self.point
        return math.sqrt(p * (1 - p) / self.trials)

    def to_json_dict(self) -> dict:
        lo, hi = self.wilson
        return {"successes": self.successes, "trials": self.trials,
                "point": self.point, "wilson95": [lo, hi],
                "seed": self.master_seed, "metadata": self.metadata}
