from .scorer import OcrScorer, transcribe_for_eval, resize_for_eval, EVAL_INPUT_PX
from .toy import ToyOcrConfig, ToyOcrScorer, train_toy_ocr, load_toy_ocr

__all__ = [
    "OcrScorer",
    "transcribe_for_eval",
    "resize_for_eval",
    "EVAL_INPUT_PX",
    "ToyOcrConfig",
    "ToyOcrScorer",
    "train_toy_ocr",
    "load_toy_ocr",
]
