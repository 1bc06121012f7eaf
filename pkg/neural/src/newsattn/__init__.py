"""Toy-scale neural classifiers for article credibility.

Validates shapes, gradients, and trainability of an attention
architecture over article embeddings, plus attention and LSTM variants
over exported handcrafted feature vectors.
"""

from .embed import (EMBEDDING_DIM, Encoder, HashingEncoder, PretrainedEncoder,
                    embed, embed_all)
from .errors import (DataError, DimensionError, NewsattnError, SetupError,
                     TrainingError)
from .io import FeatureTable, NewsDoc, load_feature_csv, load_labeled_news, write_report
from .model import (AttentionClassifier, LstmClassifier, ModelConfig,
                    max_relative_grad_error)
from .preprocess import (LEAD_MARKER, SENT_MARKER, STOP_WORDS,
                         PreprocessedArticle, preprocess)
from .train import TrainResult, classification_report, standardize, train_toy

__version__ = "0.1.0"

__all__ = [
    "EMBEDDING_DIM", "Encoder", "HashingEncoder", "PretrainedEncoder",
    "embed", "embed_all",
    "DataError", "DimensionError", "NewsattnError", "SetupError", "TrainingError",
    "FeatureTable", "NewsDoc", "load_feature_csv", "load_labeled_news", "write_report",
    "AttentionClassifier", "LstmClassifier", "ModelConfig", "max_relative_grad_error",
    "LEAD_MARKER", "SENT_MARKER", "STOP_WORDS", "PreprocessedArticle", "preprocess",
    "TrainResult", "classification_report", "standardize", "train_toy",
    "__version__",
]
