"""Exception hierarchy for the exporter.

Everything raised on purpose derives from ExportError so the CLI can turn
any expected failure into a clean one-line message and a nonzero exit.
"""


class ExportError(Exception):
    """Base class for all expected exporter failures."""


class UnknownModelError(ExportError):
    """Requested model name is not in the registry."""


class WeightsError(ExportError):
    """Pretrained weights could not be obtained or loaded."""


class DimMismatchError(ExportError):
    """Emitted feature width disagrees with the model spec."""


class DatasetError(ExportError):
    """Dataset directory layout is missing or empty."""


class OutputError(ExportError):
    """Output CSV or manifest could not be written."""
