"""Prompt templates and the lookup vocabulary feeding the U-Net embeddings."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnknownTemplate

# Registered instruction variants. "default" is the canonical phrasing;
# the rest rephrase the same request and share the learned lookup slot
# semantics (template identity is an embedding index).
TEMPLATES: dict[str, str] = {
    "default": "a typography of '{c}'",
    "variant_letter": "a letter '{c}' in a decorative style",
    "variant_text": "visual text '{c}'",
    "variant_render": "the character '{c}' rendered as stylized typography",
    "variant_glyph": "an artistic glyph of '{c}'",
    "variant_design": "a designed character '{c}' matching the reference style",
}


@dataclass(frozen=True)
class PromptConditioning:
    char_idx: int
    subject_idx: int
    template_idx: int
    text: str

    def as_row(self) -> tuple[int, int, int]:
        return (self.char_idx, self.subject_idx, self.template_idx)


@dataclass
class PromptVocabulary:
    """Index assignment for characters, subjects, and templates."""

    chars: list[str]
    subjects: list[str]
    templates: list[str]

    def __post_init__(self):
        self._char_idx = {c: i for i, c in enumerate(self.chars)}
        self._subject_idx = {s: i for i, s in enumerate(self.subjects)}
        self._template_idx = {t: i for i, t in enumerate(self.templates)}

    @classmethod
    def build(cls, chars: list[str], subjects: list[str]) -> "PromptVocabulary":
        return cls(chars=list(chars), subjects=list(subjects), templates=list(TEMPLATES))

    def to_dict(self) -> dict:
        return {"chars": self.chars, "subjects": self.subjects, "templates": self.templates}

    @classmethod
    def from_dict(cls, d: dict) -> "PromptVocabulary":
        return cls(chars=list(d["chars"]), subjects=list(d["subjects"]), templates=list(d["templates"]))

    def char_index(self, char: str) -> int:
        if char not in self._char_idx:
            raise KeyError(f"char {char!r} not in vocabulary {self.chars}")
        return self._char_idx[char]


def render_prompt_text(template_id: str, char: str) -> str:
    if template_id not in TEMPLATES:
        raise UnknownTemplate(f"unknown template {template_id!r}; known: {sorted(TEMPLATES)}")
    return TEMPLATES[template_id].format(c=char)


def encode_prompt(
    template_id: str, char: str, subject_id: str, vocab: PromptVocabulary
) -> PromptConditioning:
    """Deterministic conditioning for one (template, char, subject) triple."""
    text = render_prompt_text(template_id, char)
    if subject_id not in vocab._subject_idx:
        raise KeyError(f"subject {subject_id!r} not in vocabulary {vocab.subjects}")
    return PromptConditioning(
        char_idx=vocab.char_index(char),
        subject_idx=vocab._subject_idx[subject_id],
        template_idx=vocab._template_idx[template_id],
        text=text,
    )
