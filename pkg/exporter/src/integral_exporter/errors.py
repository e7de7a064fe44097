"""Exporter error types."""


class ExportError(Exception):
    """Bad geometry spec, manifest, or unavailable basis."""


class ScfError(ExportError):
    """SCF setup or convergence failure."""
