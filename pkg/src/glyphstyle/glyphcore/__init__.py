from .types import (
    Script,
    ReviewStatus,
    GlyphSpec,
    CharacterBox,
    PosterRecord,
    Review,
    PosterPair,
    BenchManifest,
    StyleSubject,
    MANIFEST_VERSION,
)
from .render import FontRegistry, render_glyph, default_font_registry
from .fontgen import build_synthetic_font
from .manifest import load_manifest, save_manifest, manifest_from_dict, manifest_to_dict
from .crops import crop_characters, pair_character_sets, CharacterSetPair
from .corpus import CorpusConfig, build_synthetic_style_corpus, STYLE_FAMILIES

__all__ = [
    "Script",
    "ReviewStatus",
    "GlyphSpec",
    "CharacterBox",
    "PosterRecord",
    "Review",
    "PosterPair",
    "BenchManifest",
    "StyleSubject",
    "MANIFEST_VERSION",
    "FontRegistry",
    "render_glyph",
    "default_font_registry",
    "build_synthetic_font",
    "load_manifest",
    "save_manifest",
    "manifest_from_dict",
    "manifest_to_dict",
    "crop_characters",
    "pair_character_sets",
    "CharacterSetPair",
    "CorpusConfig",
    "build_synthetic_style_corpus",
    "STYLE_FAMILIES",
]
