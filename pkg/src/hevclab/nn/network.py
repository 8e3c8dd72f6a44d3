"""Three-branch network container used by all the block classifiers."""

from __future__ import annotations

import numpy as np

from .layers import Concat, Layer, Param


class BranchNet:
    """stem -> parallel branches -> channel concat -> trunk.

    Any stage may be empty; a plain sequential net is a BranchNet with a
    single empty-branch list.  Forward returns (output, cache); backward
    replays the cache and accumulates parameter gradients.
    """

    def __init__(self, stem: list[Layer], branches: list[list[Layer]],
                 trunk: list[Layer]):
        self.stem = stem
        self.branches = branches
        self.trunk = trunk
        self.concat = Concat()

    def params(self) -> list[Param]:
        out = []
        for layer in self.stem:
            out.extend(layer.params())
        for branch in self.branches:
            for layer in branch:
                out.extend(layer.params())
        for layer in self.trunk:
            out.extend(layer.params())
        return out

    def zero_grads(self) -> None:
        for p in self.params():
            p.grad[...] = 0.0

    def state(self) -> dict[str, np.ndarray]:
        return {f"p{i}.{p.name}": p.value.copy() for i, p in enumerate(self.params())}

    def load_state(self, state: dict[str, np.ndarray]) -> None:
        params = self.params()
        if len(state) != len(params):
            raise ValueError("state does not match network parameters")
        for i, p in enumerate(params):
            src = state[f"p{i}.{p.name}"]
            if src.shape != p.value.shape:
                raise ValueError(f"shape mismatch for {p.name}")
            p.value[...] = src

    def forward(self, x: np.ndarray, training: bool = False, rng=None):
        cache = []
        for layer in self.stem:
            ctx = {}
            x = layer.forward(x, ctx, training, rng)
            cache.append((layer, ctx))
        if self.branches:
            outs = []
            branch_caches = []
            for branch in self.branches:
                bx = x
                bcache = []
                for layer in branch:
                    ctx = {}
                    bx = layer.forward(bx, ctx, training, rng)
                    bcache.append((layer, ctx))
                outs.append(bx)
                branch_caches.append(bcache)
            ctx = {}
            x = self.concat.forward(outs, ctx, training, rng)
            cache.append(("branches", branch_caches, ctx))
        for layer in self.trunk:
            ctx = {}
            x = layer.forward(x, ctx, training, rng)
            cache.append((layer, ctx))
        return x, cache

    def backward(self, cache, grad: np.ndarray) -> np.ndarray:
        for entry in reversed(cache):
            if entry[0] == "branches":
                _, branch_caches, ctx = entry
                branch_grads = self.concat.backward(grad, ctx)
                input_grad = None
                for bcache, bgrad in zip(branch_caches, branch_grads):
                    g = bgrad
                    for layer, lctx in reversed(bcache):
                        g = layer.backward(g, lctx)
                    input_grad = g if input_grad is None else input_grad + g
                grad = input_grad
            else:
                layer, ctx = entry
                grad = layer.backward(grad, ctx)
        return grad
