"""Exception types shared across the package."""


class HistofeatError(Exception):
    """Base class for all package errors."""


class DatasetLayoutError(HistofeatError):
    """Dataset root is missing a required class subdirectory."""


class EmptyClassError(HistofeatError):
    """A class subdirectory contains no decodable images."""


class StratificationError(HistofeatError):
    """A class has fewer samples than the requested fold count."""


class ImageReadError(HistofeatError):
    """File could not be read; carries the offending path."""


class ImageFormatError(HistofeatError):
    """File is not a decodable PNG/BMP/JPEG image."""


class DegenerateImageError(HistofeatError):
    """Image too small for the requested neighborhood or offset."""


class ConfigError(HistofeatError):
    """Invalid configuration value."""


class ShapeError(HistofeatError):
    """Mismatched array shapes or widths."""


class BankError(HistofeatError):
    """Haar template does not fit inside the image."""


class FeatureFormatError(HistofeatError):
    """Feature CSV violates the canonical format; message carries line numbers."""


class AlignmentError(HistofeatError):
    """Feature tables or datasets disagree on sample ids; lists missing ids."""
