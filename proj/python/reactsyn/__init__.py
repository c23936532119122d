"""Bounded synthesis of reactive while-programs from LTL specifications."""

from ._core import NonReactiveError, ReactsynError, format, run, synthesize, verify

__all__ = ["NonReactiveError", "ReactsynError", "format", "run", "synthesize", "verify"]
