"""Hecke operators acting on Ehrhart polynomials of lattice polytopes."""

from __future__ import annotations

__version__ = "0.1.0"
