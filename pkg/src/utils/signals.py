"""Excitation input signals"""

import math
from typing import List

import numpy as np

from ..models.scenario import InputSpec


class InputSignal:
    """Deterministic input u(t) bounded by the configured amplitude"""

    def __init__(self, spec: InputSpec):
        """Initialize input signal

        Args:
            spec: Signal family, amplitude bound and seed
        """
        self.spec = spec
        self.amplitude = spec.amplitude
        self._rng = np.random.default_rng(spec.seed)
        self._frequencies = [float(w) for w in spec.frequencies]
        self._phases: List[float] = []
        self._held: List[float] = []
        if spec.kind == "multisine":
            self._phases = list(
                self._rng.uniform(0.0, 2.0 * math.pi, len(self._frequencies))
            )

    @classmethod
    def constant(cls, level: float) -> "InputSignal":
        return cls(
            InputSpec(kind="constant", amplitude=abs(level), level=level)
        )

    def __call__(self, t: float) -> float:
        kind = self.spec.kind
        if kind == "constant":
            return self.spec.level
        if kind == "multisine":
            weight = self.amplitude / len(self._frequencies)
            return weight * sum(
                math.sin(w * t + phi)
                for w, phi in zip(self._frequencies, self._phases)
            )
        index = int(math.floor(t / self.spec.hold_time + 1e-12))
        # values are drawn in index order, so any query order is reproducible
        while len(self._held) <= index:
            self._held.append(
                float(self._rng.uniform(-self.amplitude, self.amplitude))
            )
        return self._held[index]
