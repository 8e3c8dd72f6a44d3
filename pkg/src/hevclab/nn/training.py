"""Adaptive-moment training loop with step decay and best-snapshot return."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .losses import mnrc_loss, size_loss
from .network import BranchNet


class TrainingError(RuntimeError):
    pass


@dataclass
class TrainConfig:
    learning_rate: float = 5e-3
    epochs: int = 150
    decay_every: int = 50
    decay_factor: float = 0.1
    batch_size: int = 64
    seed: int = 0
    th_rd: float = 0.02  # size loss: rd_loss below this is down-weighted
    w: float = 0.25      # ... by this factor


@dataclass
class ArrayDataset:
    """Inputs plus task targets: int labels for size, 3-vectors for mnrc."""

    x: np.ndarray
    y: np.ndarray
    rd_loss: np.ndarray | None = None

    def __len__(self):
        return self.x.shape[0]


class Adam:
    def __init__(self, params, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = [np.zeros_like(p.value) for p in params]
        self.v = [np.zeros_like(p.value) for p in params]
        self.t = 0

    def step(self, lr: float) -> None:
        self.t += 1
        b1c = 1.0 - self.beta1 ** self.t
        b2c = 1.0 - self.beta2 ** self.t
        for p, m, v in zip(self.params, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * p.grad
            v *= self.beta2
            v += (1.0 - self.beta2) * p.grad * p.grad
            p.value -= lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)


def _softmax(logits):
    e = np.exp(logits - logits.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def gear_from_outputs(pred: np.ndarray) -> np.ndarray:
    """argmax over 3 expectation outputs; ties go to the larger gear."""
    rev = pred[:, ::-1]
    return 3 - rev.argmax(axis=1)


def accuracy(net: BranchNet, data: ArrayDataset, loss_kind: str) -> float:
    out, _ = net.forward(data.x, training=False)
    if loss_kind == "size":
        return float((_softmax(out).argmax(axis=1) == data.y).mean())
    pred_gear = gear_from_outputs(out)
    true_gear = gear_from_outputs(data.y)
    return float((pred_gear == true_gear).mean())


@dataclass
class EpochMetrics:
    epoch: int
    lr: float
    train_loss: float
    val_accuracy: float


def train(net: BranchNet, train_set: ArrayDataset, val_set: ArrayDataset,
          config: TrainConfig, loss_kind: str) -> list[EpochMetrics]:
    """Train in place; the best-validation-accuracy weights are restored
    before returning the per-epoch metrics."""
    if loss_kind not in ("size", "mnrc"):
        raise ValueError(f"unknown loss kind {loss_kind!r}")
    if len(train_set) == 0:
        raise TrainingError("empty training set")
    if loss_kind == "size" and train_set.rd_loss is None:
        raise TrainingError("size training needs rd_loss weights")

    rng = np.random.default_rng(config.seed)
    opt = Adam(net.params())
    history: list[EpochMetrics] = []
    best = (-1.0, None)

    n_classes = 2 if loss_kind == "size" else 3
    for epoch in range(config.epochs):
        lr = config.learning_rate * config.decay_factor ** (epoch // config.decay_every)
        order = rng.permutation(len(train_set))
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, len(order), config.batch_size):
            idx = order[start : start + config.batch_size]
            xb = train_set.x[idx]
            out, cache = net.forward(xb, training=True, rng=rng)
            if loss_kind == "size":
                onehot = np.eye(n_classes)[train_set.y[idx]]
                loss, dout = size_loss(_softmax(out), onehot,
                                       train_set.rd_loss[idx], config.th_rd, config.w)
            else:
                loss, dout = mnrc_loss(out, train_set.y[idx])
            if not np.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss {loss} at epoch {epoch}, batch {n_batches}"
                )
            net.zero_grads()
            net.backward(cache, dout)
            opt.step(lr)
            epoch_loss += loss
            n_batches += 1
        val_acc = accuracy(net, val_set, loss_kind) if len(val_set) else 0.0
        history.append(EpochMetrics(epoch, lr, epoch_loss / max(n_batches, 1), val_acc))
        if val_acc > best[0]:
            best = (val_acc, net.state())

    if best[1] is not None:
        net.load_state(best[1])
    return history
