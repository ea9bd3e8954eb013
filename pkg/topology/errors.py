"""
topology/errors.py  –  Exception hierarchy shared by every surfacekit module.

Gates never raise these for ordinary failures: they return verdict models.
Exceptions mark inputs outside a contract or configurations the exact
engine does not cover.
"""

from typing import Optional, Tuple


class TopologyError(Exception):
    """Base class for all surfacekit errors."""


class BlueprintError(TopologyError):
    def __init__(self, message: str, vertex: Optional[int] = None):
        super().__init__(message)
        self.vertex = vertex


class StageError(TopologyError):
    def __init__(self, message: str, stage: Optional[int] = None):
        super().__init__(message)
        self.stage = stage


class UnresolvedCurveError(TopologyError):
    def __init__(self, name: str):
        super().__init__(f"curve {name!r} does not resolve in the built stages")
        self.name = name


class UnsupportedError(TopologyError):
    """Outside the exact domain. `lower_bound` is a valid lower bound when known."""

    def __init__(
        self,
        message: str,
        pair: Optional[Tuple[str, str]] = None,
        letter: Optional[str] = None,
        lower_bound: int = 0,
    ):
        super().__init__(message)
        self.pair = pair
        self.letter = letter
        self.lower_bound = lower_bound


class ConstructionError(TopologyError):
    """An internal construction invariant failed."""


class EmitError(TopologyError):
    pass


class IncoherentFamilyError(TopologyError):
    def __init__(self, message: str, stage: int):
        super().__init__(message)
        self.stage = stage
