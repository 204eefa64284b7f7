"""
Versioned JSON documents for trained models.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

from core.exceptions import DatasetError, TrainingError
from core.models.features import Representation
from core.storage import atomic_write_text

from .adaboost import AdaBoostModel
from .base import Family, TrainedModel
from .dtw import DtwModel
from .linear_svm import LinearSvmModel
from .neural_net import NnModel
from .svdd import SvddModel

FORMAT = "lamq-model"
VERSION = 1

MODEL_TYPES = {
    Family.SVM: LinearSvmModel,
    Family.SVDD: SvddModel,
    Family.ADABOOST: AdaBoostModel,
    Family.DTW: DtwModel,
    Family.NN: NnModel,
    Family.MNN: NnModel,
}


def model_to_document(model: TrainedModel) -> Dict[str, Any]:
    return {
        "format": FORMAT,
        "version": VERSION,
        "family": model.family.value,
        "representation": model.rep.value,
        "dimension": model.dimension,
        "config": model.config,
        "params": model.model.to_params(),
    }


def model_from_document(doc: Dict[str, Any]) -> TrainedModel:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise DatasetError("not a model document")
    if doc.get("version") != VERSION:
        raise DatasetError(f"unsupported model document version {doc.get('version')!r}, expected {VERSION}")
    try:
        family = Family.parse(doc["family"])
        rep = Representation.parse(doc["representation"])
        inner = MODEL_TYPES[family].from_params(doc["params"])
        dimension = int(doc["dimension"])
    except (KeyError, TypeError, ValueError) as e:
        raise DatasetError(f"malformed model document: {e}")
    return TrainedModel(family=family, rep=rep, dimension=dimension, model=inner, config=dict(doc.get("config", {})))


def save_model(model: TrainedModel, path) -> Path:
    return atomic_write_text(path, json.dumps(model_to_document(model), separators=(",", ":")) + "\n")


def load_model(path) -> TrainedModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise DatasetError(f"model file not found: {path}")
    except (OSError, json.JSONDecodeError) as e:
        raise DatasetError(f"cannot read model file {path}: {e}")
    model = model_from_document(doc)
    if model.family is Family.DTW and model.dimension % model.model.frame_dim:
        raise TrainingError("dtw template does not match the stored dimension")
    return model
