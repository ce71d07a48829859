"""Instrumentation for complexity checks."""
from dataclasses import dataclass


@dataclass
class DistanceCounter:
    """Counts squared Euclidean distance evaluations."""

    evals: int = 0

    def add(self, n: int) -> None:
        self.evals += int(n)
