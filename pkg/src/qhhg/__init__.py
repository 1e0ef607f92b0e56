"""Intraband high-harmonic generation in a one-band crystal driven by
coherent, thermal, Fock and squeezed-vacuum light."""

from .band import BandModel, zno
from .drive import PulseSpec, time_grid
from .phasespace import DrivingField

__version__ = "0.1.0"

__all__ = ["BandModel", "DrivingField", "PulseSpec", "time_grid", "zno", "__version__"]
