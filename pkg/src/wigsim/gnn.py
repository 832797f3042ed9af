"""Two-layer graph convolution with outage-masked message passing.

Messages flow only over links whose transmission succeeded this slot. The
aggregation matrix carries entry (v, u) = indicator(u->v) / sqrt(deg(v) deg(u))
with degrees taken from the original adjacency, so fully-outaged nodes get
all-zero rows rather than divide-by-zero. There is no self-loop: a node's
own features enter only through its neighbors' messages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class GCNModel:
    w1: np.ndarray      # (d, hidden)
    w2: np.ndarray      # (hidden, classes)

    def __post_init__(self):
        self.w1.setflags(write=False)
        self.w2.setflags(write=False)


def init_model(feature_dim, hidden_dim, n_classes, seed):
    """Glorot-uniform weights, deterministic per seed."""
    rng = np.random.default_rng(seed)

    def glorot(fan_in, fan_out):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-bound, bound, size=(fan_in, fan_out))

    return GCNModel(w1=glorot(feature_dim, hidden_dim),
                    w2=glorot(hidden_dim, n_classes))


def build_aggregator(g, activated):
    """Degree-normalized adjacency masked by the slot's successful links."""
    n = g.n
    mat = np.zeros((n, n))
    for link in activated:
        if g.adjacency[link.tx, link.rx]:
            mat[link.rx, link.tx] = 1.0
    deg = g.adjacency.sum(axis=1).astype(np.float64)
    inv_sqrt = np.zeros(n)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    return mat * np.outer(inv_sqrt, inv_sqrt)


def full_aggregator(g):
    """Aggregator with every link active (no outage)."""
    deg = g.adjacency.sum(axis=1).astype(np.float64)
    inv_sqrt = np.zeros(g.n)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    return g.adjacency.astype(np.float64) * np.outer(inv_sqrt, inv_sqrt)


def forward(model, g, agg):
    """Logits (n, classes); layer-2 activation lives in the loss."""
    if g.features.shape[1] != model.w1.shape[0]:
        raise ParameterError("feature dim does not match w1")
    if model.w1.shape[1] != model.w2.shape[0]:
        raise ParameterError("hidden dims of w1 and w2 disagree")
    h1 = np.maximum(agg @ g.features @ model.w1, 0.0)
    return agg @ h1 @ model.w2


def _softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grad(model, g, agg, mask):
    """Mean masked cross-entropy and exact gradients for both weights."""
    mask = np.asarray(mask, dtype=bool)
    m = int(mask.sum())
    if m == 0:
        raise ParameterError("training mask is empty")

    xa = agg @ g.features
    z1 = xa @ model.w1
    h1 = np.maximum(z1, 0.0)
    ha = agg @ h1
    logits = ha @ model.w2

    probs = _softmax(logits)
    idx = np.flatnonzero(mask)
    picked = probs[idx, g.labels[idx]]
    loss = -float(np.log(np.maximum(picked, 1e-300)).mean())

    dlogits = probs.copy()
    dlogits[idx, g.labels[idx]] -= 1.0
    dlogits[~mask] = 0.0
    dlogits /= m

    gw2 = ha.T @ dlogits
    dh1 = (agg.T @ (dlogits @ model.w2.T)) * (z1 > 0)
    gw1 = xa.T @ dh1
    return loss, (gw1, gw2)


def train_step(model, grads, lr):
    gw1, gw2 = grads
    return GCNModel(w1=model.w1 - lr * gw1, w2=model.w2 - lr * gw2)


def evaluate(model, g, agg, mask):
    """Argmax accuracy over the masked nodes."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ParameterError("evaluation mask is empty")
    pred = forward(model, g, agg).argmax(axis=1)
    return float((pred[mask] == g.labels[mask]).mean())
