"""Neural mass plant and its parameterized observer"""

from typing import Dict

import numpy as np
from scipy.special import expit

from ..models.scenario import GainsSpec, ModelSpec
from ..utils.integrator import VectorField

STATE_DIM = 6
PARAM_DIM = 2


class NeuralMassModel:
    """Six-state neural mass model with two unknown synaptic gains

    States are (x11, x12, x21, x22, x31, x32); the measured output is
    y = x21 - x31. Field evaluation is written per state row on the last
    array axis, so a stack of observers and the plant share one call and
    a row equal to the plant state reproduces the plant derivative exactly.
    """

    def __init__(self, constants: ModelSpec = None):
        """Initialize neural mass model

        Args:
            constants: Model constants, defaults to the benchmark values
        """
        self.constants = constants or ModelSpec()
        c = self.constants
        self.a, self.b = c.a, c.b
        self.c1, self.c2, self.c3, self.c4 = c.c1, c.c2, c.c3, c.c4
        self.e0, self.v0, self.r = c.e0, c.v0, c.r
        self._input_index = 1 if c.b_row4_uses_p2 else 0

    def sigmoid(self, v):
        """Firing-rate nonlinearity with values in (0, 2 e0)"""
        return 2.0 * self.e0 * expit(self.r * (np.asarray(v) - self.v0))

    @staticmethod
    def output(x: np.ndarray):
        """y = C x"""
        return x[..., 2] - x[..., 4]

    def drift(
        self,
        x: np.ndarray,
        p: np.ndarray,
        u: float,
        y,
        gains_l: np.ndarray,
        gains_k: np.ndarray,
    ) -> np.ndarray:
        """A x + G(p) gamma(H x + K e) + B(p) phi(u, y) + L e, e = y - C x"""
        a, b = self.a, self.b
        x11, x12 = x[..., 0], x[..., 1]
        x21, x22 = x[..., 2], x[..., 3]
        x31, x32 = x[..., 4], x[..., 5]
        p1, p2 = p[..., 0], p[..., 1]
        p_in = p[..., self._input_index]

        innovation = y - (x21 - x31)
        fire_1 = self.sigmoid(self.c1 * x11 + gains_k[0] * innovation)
        fire_2 = self.sigmoid(self.c3 * x11 + gains_k[1] * innovation)
        feedback = self.sigmoid(y)

        dx = np.empty(np.broadcast(x11, p1, innovation).shape + (STATE_DIM,))
        dx[..., 0] = x12 + gains_l[0] * innovation
        dx[..., 1] = (
            -a * a * x11 - 2.0 * a * x12 + p1 * a * feedback
            + gains_l[1] * innovation
        )
        dx[..., 2] = x22 + gains_l[2] * innovation
        dx[..., 3] = (
            -a * a * x21 - 2.0 * a * x22 + p1 * a * self.c2 * fire_1
            + p_in * a * u + gains_l[3] * innovation
        )
        dx[..., 4] = x32 + gains_l[4] * innovation
        dx[..., 5] = (
            -b * b * x31 - 2.0 * b * x32 + p2 * b * self.c4 * fire_2
            + gains_l[5] * innovation
        )
        return dx

    def plant_field(self, x: np.ndarray, p, u: float) -> np.ndarray:
        """Plant derivative; phi is driven by the plant's own output"""
        p = np.asarray(p, dtype=float)
        zeros = np.zeros(STATE_DIM)
        return self.drift(x, p, u, self.output(x), zeros, zeros[:2])

    def observer_field(
        self, x_hat: np.ndarray, p, u: float, y, gains: GainsSpec
    ) -> np.ndarray:
        """Observer derivative driven by the measured (u, y)"""
        p = np.asarray(p, dtype=float)
        return self.drift(
            x_hat, p, u, y, np.asarray(gains.L), np.asarray(gains.K)
        )

    def matrices(self, p) -> Dict[str, np.ndarray]:
        """Explicit A, G(p), B(p), H, C of the state-space form"""
        p1, p2 = float(p[0]), float(p[1])
        a, b = self.a, self.b
        block_a = np.array([[0.0, 1.0], [-a * a, -2.0 * a]])
        block_b = np.array([[0.0, 1.0], [-b * b, -2.0 * b]])
        A = np.zeros((6, 6))
        A[0:2, 0:2] = block_a
        A[2:4, 2:4] = block_a
        A[4:6, 4:6] = block_b
        G = np.zeros((6, 2))
        G[3, 0] = p1 * a * self.c2
        G[5, 1] = p2 * b * self.c4
        B = np.zeros((6, 2))
        B[1, 0] = p1 * a
        B[3, 1] = (p2 if self._input_index else p1) * a
        H = np.zeros((2, 6))
        H[0, 0] = self.c1
        H[1, 0] = self.c3
        C = np.array([[0.0, 0.0, 1.0, 0.0, -1.0, 0.0]])
        return {"A": A, "G": G, "B": B, "H": H, "C": C}

    def bank_vector_field(
        self, params: np.ndarray, gains: GainsSpec
    ) -> VectorField:
        """Joint field of the plant (row 0) and an observer bank (rows 1..N)

        ``params`` holds the plant parameter in row 0 and one observer
        parameter per following row. Observers see the plant's output
        at every RK4 stage.
        """
        params = np.asarray(params, dtype=float)
        gains_l, gains_k = np.asarray(gains.L), np.asarray(gains.K)

        def _field(z: np.ndarray, t: float, u: float) -> np.ndarray:
            y = z[0, 2] - z[0, 4]
            return self.drift(z, params, u, y, gains_l, gains_k)

        return VectorField(
            func=_field, dimension=STATE_DIM, name="neural-mass bank"
        )
