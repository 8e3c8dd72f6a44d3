"""Minimal deterministic layer zoo: exactly what the block classifiers need.

Layers operate on float64 (B, C, H, W) arrays.  Forward passes record what
backward needs into a per-call context dict, so nets stay pure functions
of (weights, input, seed).
"""

from __future__ import annotations

import numpy as np


class Param:
    __slots__ = ("name", "value", "grad")

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = value
        self.grad = np.zeros_like(value)


class Layer:
    def params(self) -> list[Param]:
        return []

    def forward(self, x, ctx, training=False, rng=None):
        raise NotImplementedError

    def backward(self, grad, ctx):
        raise NotImplementedError


def _xavier_uniform(rng, shape, fan_in, fan_out):
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape)


def same_padding(size: int, kernel: int, stride: int) -> tuple[int, int]:
    """Centered zero padding with the remainder at the end (TF convention)."""
    out = -(-size // stride)
    total = max((out - 1) * stride + kernel - size, 0)
    return total // 2, total - total // 2


def _im2col(x, kh, kw, stride):
    b, c, h, w = x.shape
    oh = (h - kh) // stride + 1
    ow = (w - kw) // stride + 1
    s0, s1, s2, s3 = x.strides
    patches = np.lib.stride_tricks.as_strided(
        x, (b, c, kh, kw, oh, ow), (s0, s1, s2, s3, s2 * stride, s3 * stride)
    )
    return patches.reshape(b, c * kh * kw, oh * ow), oh, ow


def _col2im(dcols, x_shape, kh, kw, stride, oh, ow):
    b, c, h, w = x_shape
    dx = np.zeros(x_shape)
    d6 = dcols.reshape(b, c, kh, kw, oh, ow)
    for i in range(kh):
        for j in range(kw):
            dx[:, :, i : i + oh * stride : stride, j : j + ow * stride : stride] += d6[:, :, i, j]
    return dx


class Conv2D(Layer):
    """Cross-correlation with stride and 'valid' or 'same' zero padding."""

    def __init__(self, in_ch, out_ch, kh, kw, stride=1, pad="valid", rng=None, tag=""):
        self.in_ch, self.out_ch = in_ch, out_ch
        self.kh, self.kw, self.stride, self.pad = kh, kw, stride, pad
        rng = rng or np.random.default_rng(0)
        fan_in = in_ch * kh * kw
        fan_out = out_ch * kh * kw
        self.weight = Param(f"{tag}w", _xavier_uniform(rng, (out_ch, in_ch, kh, kw), fan_in, fan_out))
        self.bias = Param(f"{tag}b", np.zeros(out_ch))

    def params(self):
        return [self.weight, self.bias]

    def _pads(self, h, w):
        if self.pad == "valid":
            return (0, 0), (0, 0)
        return same_padding(h, self.kh, self.stride), same_padding(w, self.kw, self.stride)

    def out_shape(self, h, w):
        (pt, pb), (pl, pr) = self._pads(h, w)
        oh = (h + pt + pb - self.kh) // self.stride + 1
        ow = (w + pl + pr - self.kw) // self.stride + 1
        return oh, ow

    def forward(self, x, ctx, training=False, rng=None):
        if x.shape[1] != self.in_ch:
            raise ValueError(f"conv expects {self.in_ch} channels, got {x.shape[1]}")
        (pt, pb), (pl, pr) = self._pads(x.shape[2], x.shape[3])
        xp = np.pad(x, ((0, 0), (0, 0), (pt, pb), (pl, pr))) if pt + pb + pl + pr else x
        cols, oh, ow = _im2col(xp, self.kh, self.kw, self.stride)
        w2 = self.weight.value.reshape(self.out_ch, -1)
        y = (w2 @ cols) + self.bias.value[None, :, None]
        ctx["cols"], ctx["xp_shape"], ctx["pads"] = cols, xp.shape, (pt, pb, pl, pr)
        ctx["x_shape"], ctx["ohw"] = x.shape, (oh, ow)
        return y.reshape(x.shape[0], self.out_ch, oh, ow)

    def backward(self, grad, ctx):
        b = grad.shape[0]
        oh, ow = ctx["ohw"]
        g2 = grad.reshape(b, self.out_ch, oh * ow)
        cols = ctx["cols"]
        self.weight.grad += np.matmul(g2, cols.transpose(0, 2, 1)).sum(axis=0).reshape(
            self.weight.value.shape
        )
        self.bias.grad += grad.sum(axis=(0, 2, 3))
        w2 = self.weight.value.reshape(self.out_ch, -1)
        dcols = np.matmul(w2.T[None], g2)
        dxp = _col2im(dcols, ctx["xp_shape"], self.kh, self.kw, self.stride, oh, ow)
        pt, pb, pl, pr = ctx["pads"]
        h, w = ctx["x_shape"][2], ctx["x_shape"][3]
        return dxp[:, :, pt : pt + h, pl : pl + w]


class Linear(Layer):
    def __init__(self, in_dim, out_dim, rng=None, tag=""):
        self.in_dim, self.out_dim = in_dim, out_dim
        rng = rng or np.random.default_rng(0)
        self.weight = Param(f"{tag}w", _xavier_uniform(rng, (out_dim, in_dim), in_dim, out_dim))
        self.bias = Param(f"{tag}b", np.zeros(out_dim))

    def params(self):
        return [self.weight, self.bias]

    def forward(self, x, ctx, training=False, rng=None):
        if x.shape[1] != self.in_dim:
            raise ValueError(f"linear expects width {self.in_dim}, got {x.shape[1]}")
        ctx["x"] = x
        return x @ self.weight.value.T + self.bias.value

    def backward(self, grad, ctx):
        self.weight.grad += grad.T @ ctx["x"]
        self.bias.grad += grad.sum(axis=0)
        return grad @ self.weight.value


class LeakyReLU(Layer):
    def __init__(self, alpha=0.25):
        self.alpha = alpha

    def forward(self, x, ctx, training=False, rng=None):
        ctx["pos"] = x > 0
        return np.where(ctx["pos"], x, self.alpha * x)

    def backward(self, grad, ctx):
        return np.where(ctx["pos"], grad, self.alpha * grad)


class Dropout(Layer):
    """Inverted dropout: inference needs no rescaling."""

    def __init__(self, rate=0.5):
        if not 0.0 <= rate < 1.0:
            raise ValueError("dropout rate must be in [0, 1)")
        self.rate = rate

    def forward(self, x, ctx, training=False, rng=None):
        if not training or self.rate == 0.0:
            ctx["mask"] = None
            return x
        ctx["mask"] = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * ctx["mask"]

    def backward(self, grad, ctx):
        if ctx["mask"] is None:
            return grad
        return grad * ctx["mask"]


class AvgPool2(Layer):
    """2x2 average pooling, stride 2."""

    def forward(self, x, ctx, training=False, rng=None):
        b, c, h, w = x.shape
        if h % 2 or w % 2:
            raise ValueError("average pool needs even spatial dims")
        ctx["shape"] = x.shape
        return x.reshape(b, c, h // 2, 2, w // 2, 2).mean(axis=(3, 5))

    def backward(self, grad, ctx):
        return np.repeat(np.repeat(grad, 2, axis=2), 2, axis=3) / 4.0


class Flatten(Layer):
    def forward(self, x, ctx, training=False, rng=None):
        ctx["shape"] = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad, ctx):
        return grad.reshape(ctx["shape"])


class Softmax(Layer):
    def forward(self, x, ctx, training=False, rng=None):
        e = np.exp(x - x.max(axis=1, keepdims=True))
        y = e / e.sum(axis=1, keepdims=True)
        ctx["y"] = y
        return y

    def backward(self, grad, ctx):
        y = ctx["y"]
        return y * (grad - (grad * y).sum(axis=1, keepdims=True))


class Concat(Layer):
    """Channel concatenation of parallel branch outputs."""

    def forward(self, xs, ctx, training=False, rng=None):
        shapes = {x.shape[2:] for x in xs}
        if len(shapes) != 1:
            raise ValueError(f"branch maps differ spatially: {sorted(shapes)}")
        ctx["channels"] = [x.shape[1] for x in xs]
        return np.concatenate(xs, axis=1)

    def backward(self, grad, ctx):
        outs = []
        start = 0
        for c in ctx["channels"]:
            outs.append(grad[:, start : start + c])
            start += c
        return outs
