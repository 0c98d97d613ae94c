"""Exception types shared across the package."""


class ContextSearchError(Exception):
    """Base class for all errors raised by this package."""


class OntologyError(ContextSearchError):
    """Bad ontology input (cycle, typing violation, malformed line)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CorpusError(ContextSearchError):
    """Bad corpus input (malformed record, out-of-range span)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BracketParseError(ContextSearchError):
    """Malformed bracketed parse string."""

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at char {pos})"
        super().__init__(message)
        self.pos = pos


class QueryParseError(ContextSearchError):
    """Syntax error in the query grammar."""

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at char {pos})"
        super().__init__(message)
        self.pos = pos


class UnknownNameError(ContextSearchError):
    """Query references a class, instance or relation the ontology lacks."""


class QueryTypingError(ContextSearchError):
    """Relation arc does not type-check against its endpoint nodes."""


class QueryTooBroadError(ContextSearchError):
    """Intermediate result exceeded the configured posting limit."""


class IndexFormatError(ContextSearchError):
    """Corrupt or inconsistent index files."""


class UnknownContextError(ContextSearchError):
    """Excerpt lookup for a context id the index does not contain."""


class FocusPathError(ContextSearchError):
    """Suggestion focus path does not address a node or arc of the query."""
