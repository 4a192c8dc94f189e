"""Supervisory observer with DIRECT parameter sampling"""

__version__ = "1.0.0"
__author__ = "Supervisory Observer Toolkit"
__description__ = (
    "Joint parameter and state estimation with a DIRECT-sampled observer bank"
)
