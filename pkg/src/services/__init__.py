"""Plant model, diagnostics and run services"""

from .neural_mass import NeuralMassModel
from .artifact_service import ArtifactService
from .metrics_service import compute_metrics
from .scenario_service import load_scenario
from .diagnostics import contraction_check, pe_diagnostic
from .direct_static import direct_static

__all__ = [
    "NeuralMassModel",
    "ArtifactService",
    "compute_metrics",
    "load_scenario",
    "contraction_check",
    "pe_diagnostic",
    "direct_static",
]
