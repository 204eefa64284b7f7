"""
Classifier families: linear SVM, one-class hypersphere, AdaBoost stumps, DTW template matching, sigmoid networks.
"""

from .adaboost import AdaBoostConfig, AdaBoostModel, Stump, adaboost_train, stump_search
from .base import Family, TrainedModel, decide, predict
from .dtw import DtwConfig, DtwModel, dtw_distance, dtw_train
from .linear_svm import LinearSvmModel, SvmConfig, svm_train
from .neural_net import NnConfig, NnModel, nn_train
from .serialization import load_model, save_model
from .svdd import SvddConfig, SvddModel, svdd_train
from .training import make_config, train_model

__all__ = [
    "AdaBoostConfig", "AdaBoostModel", "Stump", "adaboost_train", "stump_search",
    "Family", "TrainedModel", "decide", "predict",
    "DtwConfig", "DtwModel", "dtw_distance", "dtw_train",
    "LinearSvmModel", "SvmConfig", "svm_train",
    "NnConfig", "NnModel", "nn_train",
    "load_model", "save_model",
    "SvddConfig", "SvddModel", "svdd_train",
    "make_config", "train_model",
]
