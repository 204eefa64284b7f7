"""
Family dispatch: fit any classifier family on a feature table.
"""

from __future__ import annotations

import time
from typing import Any, Dict, Mapping, Optional, Type

import numpy as np
from pydantic import BaseModel

from core.exceptions import TrainingError, ValidationError
from core.logging import logger
from core.models.features import FeatureTable
from core.validators import ConfigValidator

from .adaboost import AdaBoostConfig, adaboost_train
from .base import Family, TrainedModel
from .dtw import DtwConfig, dtw_train
from .linear_svm import SvmConfig, svm_train
from .neural_net import MULTI_LAYER_HIDDEN, NnConfig, nn_train
from .svdd import SvddConfig, svdd_train

CONFIG_TYPES: Dict[Family, Type[BaseModel]] = {
    Family.SVM: SvmConfig,
    Family.SVDD: SvddConfig,
    Family.ADABOOST: AdaBoostConfig,
    Family.DTW: DtwConfig,
    Family.NN: NnConfig,
    Family.MNN: NnConfig,
}


def make_config(family: Family, overrides: Optional[Mapping[str, Any]] = None, seed: Optional[int] = None) -> BaseModel:
    """Typed config for a family; ``seed`` is applied where the family uses randomness"""
    values: Dict[str, Any] = {}
    if family is Family.MNN:
        values["hidden_sizes"] = MULTI_LAYER_HIDDEN
    config_type = CONFIG_TYPES[family]
    if seed is not None and "seed" in config_type.model_fields:
        values["seed"] = seed
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = sorted(set(values) - set(config_type.model_fields))
    if unknown:
        raise ValidationError(f"{family.value} does not take option(s) {', '.join(unknown)}")
    return ConfigValidator.build_config(config_type, **values)


def train_model(family: Family, table: FeatureTable, config: Optional[BaseModel] = None) -> TrainedModel:
    """Fit ``family`` on every row of ``table``; one-class families only see the good rows"""
    config = config or make_config(family)
    X = table.values
    y = table.labels.astype(np.float64)
    start = time.time()

    if family is Family.SVM:
        model = svm_train(X, y, config)
    elif family is Family.SVDD:
        model = svdd_train(X[y > 0], config)
    elif family is Family.ADABOOST:
        model = adaboost_train(X, y, config)
    elif family is Family.DTW:
        if table.rep.is_frequency:
            raise TrainingError(f"dtw works on per-frame sequences; {table.rep.value} has none")
        sequences = table.sequences()
        model = dtw_train(sequences[y > 0], config)
    elif family in (Family.NN, Family.MNN):
        model = nn_train(X, y, config)
    else:
        raise TrainingError(f"unsupported family {family}")

    logger.log_training(family.value, table.rep.value, len(table), time.time() - start)
    return TrainedModel(
        family=family,
        rep=table.rep,
        dimension=table.dimension,
        model=model,
        config=config.model_dump(mode="json"),
    )
