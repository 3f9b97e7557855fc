"""Exception types shared across the package."""

from __future__ import annotations


class IslError(Exception):
    """Base class for all library errors."""


class ContractError(IslError):
    """A documented precondition of an operation was violated."""


class ParseError(IslError):
    """Syntax error in formula/sequent/model input.

    Carries a (start, end) byte span into the offending input.
    """

    def __init__(self, message: str, start: int, end: int):
        super().__init__(message)
        self.message = message
        self.start = start
        self.end = end

    @property
    def span(self):
        from .parsing import SourceSpan
        return SourceSpan(self.start, self.end)

    def __str__(self) -> str:
        return f"{self.message} (at {self.start}..{self.end})"


class ProofCheckError(IslError):
    """A proof node failed its rule schema; `node` is the offender."""

    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.message = message
        self.node = node


class TransformError(IslError):
    """A proof transformation was applied to a proof of the wrong shape."""


class InterpolationError(IslError):
    """The constructed interpolant failed validation (construction bug)."""
