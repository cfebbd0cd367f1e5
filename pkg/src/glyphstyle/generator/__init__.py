from .prompts import (
    PromptConditioning,
    PromptVocabulary,
    TEMPLATES,
    encode_prompt,
    render_prompt_text,
)
from .losses import (
    GuidanceSchedule,
    coefficient_f,
    diffusion_loss,
    glyph_loss,
    combined_loss,
)
from .train import (
    GeneratorConfig,
    CorpusAccessAudit,
    train_generator,
    load_generator,
    GeneratorModel,
)

__all__ = [
    "PromptConditioning",
    "PromptVocabulary",
    "TEMPLATES",
    "encode_prompt",
    "render_prompt_text",
    "GuidanceSchedule",
    "coefficient_f",
    "diffusion_loss",
    "glyph_loss",
    "combined_loss",
    "GeneratorConfig",
    "CorpusAccessAudit",
    "train_generator",
    "load_generator",
    "GeneratorModel",
]
