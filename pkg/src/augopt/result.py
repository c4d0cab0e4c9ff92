from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .model import Trajectory


@dataclass(frozen=True)
class AdjointTrajectory:
    """Costates ``lambda_u, lambda_v, lambda_w`` for ``t = 0..T``."""

    lambda_u: Tuple[float, ...]
    lambda_v: Tuple[float, ...]
    lambda_w: Tuple[float, ...]

    def __len__(self):
        return len(self.lambda_u)

    def at(self, t):
        return (self.lambda_u[t], self.lambda_v[t], self.lambda_w[t])

    def as_array(self):
        return np.column_stack([self.lambda_u, self.lambda_v, self.lambda_w])


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one optimal-control solve.

    ``adjoints`` is only populated by the sweep solver.
    """

    controls: Tuple[float, ...]
    trajectory: Trajectory
    objective_value: float
    iterations: int
    converged: bool
    adjoints: Optional[AdjointTrajectory] = None
