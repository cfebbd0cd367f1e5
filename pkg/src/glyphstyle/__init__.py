"""Glyph-latent-guided diffusion for cross-language visual-text style translation.

Subpackages:
    glyphcore           glyph rendering, benchmark data model, synthetic corpora
    diffusion           VAE, noise schedule, conditional U-Net, DDIM sampler
    generator           style-subject training with glyph-latent guidance
    corrector           OCR-reward reinforcement-learning fine-tuning
    ocr                 pluggable character scorers (reward / eval roles)
    evaluator           OCR accuracy, embedding similarity, MLLM judging
    annotation_service  HTTP backend for human benchmark curation
"""

__version__ = "0.1.0"
