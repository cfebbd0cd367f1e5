"""Exception types shared across the package."""


class GlyphstyleError(Exception):
    """Base class for all package errors."""


# --- glyph rendering ---

class UnsupportedCodepoint(GlyphstyleError):
    """The selected font has no outline for the requested code point."""


class DegenerateGlyph(GlyphstyleError):
    """Rendering produced no ink (e.g. whitespace)."""


# --- data model / manifests ---

class SchemaError(GlyphstyleError):
    """A serialized record is missing a field or has the wrong type."""


class InvariantError(GlyphstyleError):
    """A record violates a declared type invariant."""


class DimensionMismatch(GlyphstyleError):
    """Image dimensions differ from the record's declared width/height."""


class DecodeError(GlyphstyleError):
    """Image bytes could not be decoded."""


class NotAccepted(GlyphstyleError):
    """Operation requires a pair with review status 'accepted'."""


class ConfigError(GlyphstyleError):
    """Invalid or incomplete configuration."""


# --- diffusion / training ---

class CorpusTooSmall(GlyphstyleError):
    """Training corpus below the required minimum size."""


class NonFiniteLoss(GlyphstyleError):
    """A training loss became NaN or infinite."""


class ShapeMismatch(GlyphstyleError):
    """Array shapes do not agree."""


class NonFiniteOutput(GlyphstyleError):
    """A model produced NaN or infinite values."""


class DegenerateDensity(GlyphstyleError):
    """Log-probability requested for a zero-variance transition."""


class MissingVae(GlyphstyleError):
    """A VAE checkpoint is required but was not provided."""


class MissingCheckpoint(GlyphstyleError):
    """A referenced checkpoint file does not exist."""


# --- corrector ---

class InvalidCount(GlyphstyleError):
    """Detected-character count below 1."""


class DegenerateBatch(GlyphstyleError):
    """Advantage computation needs at least two rewards."""


class NonFiniteRatio(GlyphstyleError):
    """Log-probability gap too large to exponentiate safely."""


class RewardCollapse(GlyphstyleError):
    """Mean reward decreased monotonically for too many epochs."""


class CharNotInVocabulary(GlyphstyleError):
    """Target character is outside the scorer's vocabulary."""


# --- ocr ---

class InsufficientFonts(GlyphstyleError):
    """Toy scorer training needs at least two fonts per script."""


class SameModelAsReward(GlyphstyleError):
    """Evaluation must not reuse the reward scorer."""


# --- generator ---

class UnknownTemplate(GlyphstyleError):
    """Prompt template id is not registered."""


# --- evaluator ---

class EmptyBatch(GlyphstyleError):
    """Metric computation received no samples."""


class DimMismatch(GlyphstyleError):
    """Embedding dimensions do not agree."""


class AllBackground(GlyphstyleError):
    """Background removal found no foreground pixels."""


class SizeError(GlyphstyleError):
    """Composite layout constraints violated."""


class JudgeRefused(GlyphstyleError):
    """Judge refused the request after all retries."""


class ParseError(GlyphstyleError):
    """No Likert score could be parsed from a judge response."""


class MissingSamples(GlyphstyleError):
    """Expected generated samples are absent from the run directory."""
