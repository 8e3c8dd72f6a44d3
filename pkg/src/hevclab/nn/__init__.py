from .layers import (
    AvgPool2,
    Concat,
    Conv2D,
    Dropout,
    Flatten,
    Layer,
    LeakyReLU,
    Linear,
    Param,
    Softmax,
)
from .losses import mnrc_loss, size_loss
from .network import BranchNet
from .training import (
    Adam,
    ArrayDataset,
    EpochMetrics,
    TrainConfig,
    TrainingError,
    accuracy,
    gear_from_outputs,
    train,
)

__all__ = [
    "Adam", "ArrayDataset", "AvgPool2", "BranchNet", "Concat", "Conv2D",
    "Dropout", "EpochMetrics", "Flatten", "Layer", "LeakyReLU", "Linear",
    "Param", "Softmax", "TrainConfig", "TrainingError", "accuracy",
    "gear_from_outputs", "mnrc_loss", "size_loss", "train",
]
