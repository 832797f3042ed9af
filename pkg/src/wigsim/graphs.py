"""Graph representation, synthetic dataset generation, and file ingestion.

Graphs are undirected (symmetric zero-diagonal adjacency) with dense node
ids 0..n-1. Every undirected edge induces two directed transmission links,
one per direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import IngestionError, ParameterError

# Deterministic seed for the train/val/test split of file-loaded graphs
# (the text formats carry no mask information).
_LOAD_SPLIT_SEED = 0


class DirectedLink(NamedTuple):
    tx: int
    rx: int


@dataclass(frozen=True)
class Graph:
    """Immutable node-classification graph.

    adjacency is a symmetric {0,1} matrix with zero diagonal; masks are
    pairwise disjoint boolean vectors whose union may leave nodes out.
    Isolated nodes are allowed.
    """

    n: int
    adjacency: np.ndarray      # (n, n) int8
    features: np.ndarray       # (n, d) float64
    labels: np.ndarray         # (n,) int64, values in [0, n_classes)
    n_classes: int
    train_mask: np.ndarray     # (n,) bool
    val_mask: np.ndarray
    test_mask: np.ndarray

    def __post_init__(self):
        for name in ("adjacency", "features", "labels",
                     "train_mask", "val_mask", "test_mask"):
            getattr(self, name).setflags(write=False)


def _split_masks(n, rng):
    """Shuffled 60/20/20 train/val/test split."""
    order = rng.permutation(n)
    n_train = int(0.6 * n)
    n_val = int(0.2 * n)
    train = np.zeros(n, dtype=bool)
    val = np.zeros(n, dtype=bool)
    test = np.zeros(n, dtype=bool)
    train[order[:n_train]] = True
    val[order[n_train:n_train + n_val]] = True
    test[order[n_train + n_val:]] = True
    return train, val, test


def generate_synthetic(n, c, p_in, p_out, d, seed):
    """Planted-partition graph with class-indicator features.

    Classes are assigned round-robin (node i gets class i mod c). Edges are
    drawn independently: probability p_in within a class, p_out across
    classes. Features are a unit one-hot class signal at dimension
    (label mod d) plus i.i.d. Gaussian noise with sigma 0.5.
    """
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ParameterError(f"need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")
    if c < 2 or n < c:
        raise ParameterError(f"need n >= c >= 2, got n={n}, c={c}")
    if d < 1:
        raise ParameterError(f"feature dim must be >= 1, got {d}")

    rng = np.random.default_rng(seed)
    labels = np.arange(n, dtype=np.int64) % c

    same = labels[:, None] == labels[None, :]
    prob = np.where(same, p_in, p_out)
    draw = rng.random((n, n))
    upper = np.triu(draw < prob, k=1)
    adjacency = (upper | upper.T).astype(np.int8)

    features = 0.5 * rng.standard_normal((n, d))
    features[np.arange(n), labels % d] += 1.0

    train, val, test = _split_masks(n, rng)
    return Graph(n=n, adjacency=adjacency, features=features, labels=labels,
                 n_classes=c, train_mask=train, val_mask=val, test_mask=test)


def _parse_feature_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    header_idx = None
    for idx, raw in enumerate(lines):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            header_idx = idx
            break
    if header_idx is None:
        raise IngestionError(f"{path}: no header line found")
    tokens = lines[header_idx].split()
    if len(tokens) < 3:
        raise IngestionError(f"{path}:{header_idx + 1}: header needs 'n d c'")
    try:
        n, d, c = int(tokens[0]), int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise IngestionError(f"{path}:{header_idx + 1}: non-integer header field") from exc
    if n < 1 or d < 1 or c < 2:
        raise IngestionError(f"{path}:{header_idx + 1}: header out of range (n={n}, d={d}, c={c})")

    labels = np.empty(n, dtype=np.int64)
    features = np.empty((n, d), dtype=np.float64)
    row = 0
    for idx in range(header_idx + 1, len(lines)):
        stripped = lines[idx].strip()
        if not stripped or stripped.startswith("#"):
            continue
        if row >= n:
            raise IngestionError(f"{path}:{idx + 1}: more than {n} feature rows")
        parts = stripped.split()
        if len(parts) != d + 1:
            raise IngestionError(
                f"{path}:{idx + 1}: expected label plus {d} features, got {len(parts)} fields")
        try:
            label = int(parts[0])
            feats = [float(p) for p in parts[1:]]
        except ValueError as exc:
            raise IngestionError(f"{path}:{idx + 1}: non-numeric field") from exc
        if not 0 <= label < c:
            raise IngestionError(f"{path}:{idx + 1}: label {label} outside [0, {c})")
        labels[row] = label
        features[row] = feats
        row += 1
    if row != n:
        raise IngestionError(f"{path}: header promised {n} rows, found {row}")
    return n, d, c, labels, features


def _parse_edge_file(path, n):
    adjacency = np.zeros((n, n), dtype=np.int8)
    with open(path, "r", encoding="utf-8") as fh:
        for idx, raw in enumerate(fh):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise IngestionError(f"{path}:{idx + 1}: expected 'u v', got {stripped!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise IngestionError(f"{path}:{idx + 1}: non-integer node id") from exc
            if not (0 <= u < n and 0 <= v < n):
                raise IngestionError(f"{path}:{idx + 1}: node id out of range [0, {n})")
            if u == v:
                raise IngestionError(f"{path}:{idx + 1}: self-loop {u}->{v} not allowed")
            adjacency[u, v] = 1
            adjacency[v, u] = 1
    return adjacency


def load_graph(edge_path, feature_path):
    """Load a graph from an edge-list file and a feature file.

    An edge listed once yields both directions. Masks are not part of the
    file formats; a deterministic 60/20/20 split is derived instead.
    """
    n, _, c, labels, features = _parse_feature_file(feature_path)
    adjacency = _parse_edge_file(edge_path, n)
    rng = np.random.default_rng(_LOAD_SPLIT_SEED)
    train, val, test = _split_masks(n, rng)
    return Graph(n=n, adjacency=adjacency, features=features, labels=labels,
                 n_classes=c, train_mask=train, val_mask=val, test_mask=test)


def save_graph(g, edge_path, feature_path):
    """Write a graph back out in the two text formats (each edge once)."""
    with open(edge_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# u v\n")
        us, vs = np.nonzero(np.triu(g.adjacency, k=1))
        for u, v in zip(us, vs):
            fh.write(f"{u} {v}\n")
    with open(feature_path, "w", encoding="utf-8", newline="\n") as fh:
        d = g.features.shape[1]
        fh.write(f"{g.n} {d} {g.n_classes}\n")
        for i in range(g.n):
            feats = " ".join(format(x, ".17g") for x in g.features[i])
            fh.write(f"{g.labels[i]} {feats}\n")


def directed_links(g):
    """All directed links, one per ordered adjacent pair, ascending (tx, rx)."""
    txs, rxs = np.nonzero(g.adjacency)
    return [DirectedLink(int(u), int(v)) for u, v in zip(txs, rxs)]


def degree(g, v):
    if not 0 <= v < g.n:
        raise ParameterError(f"node {v} outside [0, {g.n})")
    return int(g.adjacency[v].sum())
