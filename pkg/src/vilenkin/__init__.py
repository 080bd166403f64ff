"""Vilenkin-Fourier analysis on bounded mixed-radix systems."""
from .core import SpecError, SystemSpec, build_spec, parse_spec
from .transform import BACKEND, fast_forward, fast_inverse

__version__ = "0.1.0"

__all__ = ["BACKEND", "SpecError", "SystemSpec", "build_spec", "parse_spec",
           "fast_forward", "fast_inverse"]
