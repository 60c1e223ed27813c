"""Event-flow graphs: compact CFGs around events and check two-event properties."""

from ._core import (
    REPORT_SCHEMA_VERSION,
    Document,
    Error,
    Graph,
    IngestError,
    build,
    check,
    classes,
    generate,
    load,
    parse,
    stats,
    __version__,
    verify,
)

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "Document",
    "Error",
    "Graph",
    "IngestError",
    "build",
    "check",
    "classes",
    "generate",
    "load",
    "parse",
    "stats",
    "verify",
]
