"""Exception hierarchy for the translation pipeline.

Every failure raised by this package derives from TransmigrateError so
callers can catch pipeline failures without swallowing programming errors.
"""

from __future__ import annotations


class TransmigrateError(Exception):
    """Base class for all pipeline errors."""


class ConfigurationError(TransmigrateError):
    """Invalid or incomplete configuration (missing grammar, tool, backend)."""


class ArgumentError(TransmigrateError, ValueError):
    """A caller-supplied argument is out of range or malformed."""


class IntegrityError(TransmigrateError):
    """Internal consistency violated: span out of bounds, dimension
    mismatch, inconsistent graph roll-up, or state/input drift."""


class StructuralError(TransmigrateError):
    """The analyzed codebase violates a structural precondition
    (e.g. duplicate qualified class names)."""


class AssemblyError(TransmigrateError):
    """A prompt could not be assembled; message names the missing slot."""


class BudgetError(TransmigrateError):
    """Prompt budget is smaller than the untruncatable content."""


class BackendError(TransmigrateError):
    """Translation backend returned a non-success response."""


class RetryableBackendError(BackendError):
    """Transport-level backend failure that may succeed on retry."""


class ExtractionError(TransmigrateError):
    """No code could be extracted from a backend response."""


class MappingError(TransmigrateError):
    """A class-name mapping between codebases is not injective."""


class ToolError(TransmigrateError):
    """An external checker failed to run (e.g. timeout)."""


class OrderingError(TransmigrateError):
    """A pipeline stage was invoked before its prerequisites."""


class CrawlError(TransmigrateError):
    """The crawl start URL could not be fetched."""
