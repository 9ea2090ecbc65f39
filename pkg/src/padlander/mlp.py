"""Plain-numpy feedforward networks with hand-written backprop and Adam.

Hidden layers are rectified linear; the output is linear or tanh-squashed.
forward() caches layer activations so backward() can return exact
reverse-mode gradients for every weight and bias plus the gradient with
respect to the input (needed to push critic gradients into the actor).

All parameters of a network live in one contiguous flat buffer; the
per-layer weight matrices and bias vectors are views into it. That keeps
the optimizer and the target-network Polyak update single fused array
operations instead of a dozen small ones.

Parameters default to float32; float64 is available for gradient
verification against finite differences.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np


class Mlp:
    def __init__(
        self,
        layer_dims: Sequence[int],
        output_activation: str = "linear",
        rng: Optional[np.random.Generator] = None,
        dtype=np.float32,
    ):
        if len(layer_dims) < 2:
            raise ValueError("need at least an input and an output dimension")
        if output_activation not in ("linear", "tanh"):
            raise ValueError(f"unsupported output activation {output_activation!r}")
        self.layer_dims = list(layer_dims)
        self.output_activation = output_activation
        self.dtype = dtype
        self.n_params = sum(
            i * o + o for i, o in zip(layer_dims[:-1], layer_dims[1:])
        )
        self.flat = np.zeros(self.n_params, dtype=dtype)
        self.weights, self.biases = self._views(self.flat)
        rng = rng or np.random.default_rng(0)
        for w in self.weights:
            # He-style scaling for the rectifier stack.
            fan_in = w.shape[0]
            w[:] = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=w.shape)
        self._cache = None

    def _views(self, flat: np.ndarray):
        weights, biases, off = [], [], 0
        for fan_in, fan_out in zip(self.layer_dims[:-1], self.layer_dims[1:]):
            weights.append(flat[off : off + fan_in * fan_out].reshape(fan_in, fan_out))
            off += fan_in * fan_out
            biases.append(flat[off : off + fan_out])
            off += fan_out
        return weights, biases

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def parameters(self) -> List[np.ndarray]:
        """Per-tensor views in declaration order: w0, b0, w1, b1, ..."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def unflatten(self, flat: np.ndarray) -> List[np.ndarray]:
        """View a flat gradient buffer with the parameter layout."""
        w, b = self._views(flat)
        out = []
        for wi, bi in zip(w, b):
            out.append(wi)
            out.append(bi)
        return out

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Batched forward pass; x is (batch, in) or (in,)."""
        squeeze = x.ndim == 1
        h = np.atleast_2d(np.asarray(x, dtype=self.dtype))
        if h.shape[1] != self.layer_dims[0]:
            raise ValueError(f"input dim {h.shape[1]} != expected {self.layer_dims[0]}")
        activations = [h]
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w + b
            if i < self.n_layers - 1:
                h = np.maximum(z, 0.0)
            elif self.output_activation == "tanh":
                h = np.tanh(z)
            else:
                h = z
            activations.append(h)
        self._cache = activations
        return h[0] if squeeze else h

    def backward(self, upstream: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Gradients of sum(output * upstream) w.r.t. parameters and input.

        Requires a preceding forward() call; returns (flat_grads, d_input)
        where flat_grads shares the layout of self.flat (see unflatten()).
        """
        if self._cache is None:
            raise RuntimeError("backward() without a cached forward() pass")
        acts = self._cache
        delta = np.atleast_2d(np.asarray(upstream, dtype=self.dtype))
        if delta.shape != acts[-1].shape:
            raise ValueError(f"upstream shape {delta.shape} != output shape {acts[-1].shape}")
        if self.output_activation == "tanh":
            delta = delta * (1.0 - acts[-1] ** 2)
        flat_grads = np.empty_like(self.flat)
        gw, gb = self._views(flat_grads)
        for i in range(self.n_layers - 1, -1, -1):
            np.matmul(acts[i].T, delta, out=gw[i])
            np.sum(delta, axis=0, out=gb[i])
            delta = delta @ self.weights[i].T
            if i > 0:
                delta = delta * (acts[i] > 0)
        return flat_grads, delta

    def copy(self) -> "Mlp":
        clone = Mlp.__new__(Mlp)
        clone.layer_dims = list(self.layer_dims)
        clone.output_activation = self.output_activation
        clone.dtype = self.dtype
        clone.n_params = self.n_params
        clone.flat = self.flat.copy()
        clone.weights, clone.biases = clone._views(clone.flat)
        clone._cache = None
        return clone

    def load_flat(self, flat: np.ndarray) -> None:
        if flat.shape != self.flat.shape:
            raise ValueError(f"parameter vector shape {flat.shape} != {self.flat.shape}")
        self.flat[:] = flat

    def polyak_from(self, online: "Mlp", tau: float) -> None:
        """target <- tau * online + (1 - tau) * target, in place."""
        self.flat *= self.dtype(1.0 - tau)
        self.flat += self.dtype(tau) * online.flat

    def all_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.flat)))


class Adam:
    """Adam over one flat parameter buffer."""

    def __init__(self, flat_params: np.ndarray, lr: float, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = flat_params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = np.zeros_like(flat_params)
        self.v = np.zeros_like(flat_params)
        self._scratch = np.empty_like(flat_params)

    def step(self, flat_grads: np.ndarray) -> None:
        if flat_grads.shape != self.params.shape:
            raise ValueError("gradient buffer does not match parameter buffer")
        g = flat_grads.astype(self.params.dtype, copy=False)
        dt = self.params.dtype.type
        self.t += 1
        b1t = 1.0 - self.beta1**self.t
        b2t = 1.0 - self.beta2**self.t
        s = self._scratch
        self.m *= dt(self.beta1)
        np.multiply(g, dt(1.0 - self.beta1), out=s)
        self.m += s
        self.v *= dt(self.beta2)
        np.multiply(g, g, out=s)
        s *= dt(1.0 - self.beta2)
        self.v += s
        np.multiply(self.v, dt(1.0 / b2t), out=s)
        np.sqrt(s, out=s)
        s += dt(self.eps)
        np.divide(self.m, s, out=s)
        s *= dt(self.lr / b1t)
        self.params -= s
