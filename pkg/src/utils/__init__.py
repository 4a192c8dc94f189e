"""Integration and input-signal utilities"""

from .signals import InputSignal
from .integrator import Trajectory, VectorField, rk4_step, simulate

__all__ = ["InputSignal", "Trajectory", "VectorField", "rk4_step", "simulate"]
