"""Hulthen potential bound states via the asymptotic iteration method."""

from .hulthen import (
    EigenResult,
    HulthenParams,
    Method,
    QuantumState,
    energy_aim,
    energy_closed,
    spectroscopic,
)

__version__ = "0.1.0"

__all__ = [
    "EigenResult",
    "HulthenParams",
    "Method",
    "QuantumState",
    "energy_aim",
    "energy_closed",
    "spectroscopic",
]
