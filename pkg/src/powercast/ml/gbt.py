"""Second-order gradient-boosted regression trees with exact greedy splits.

Squared-error loss gives per-sample gradient ``g = yhat - y`` and hessian
``h = 1``. A split scores::

    gain = 1/2 [G_L^2/(H_L+lam) + G_R^2/(H_R+lam) - G^2/(H+lam)] - gamma

and leaves take ``w = -G / (H + lam)``. Predictions are
``base + eta * sum(tree outputs)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import Forecast, Series
from ..errors import BadHyperparameter, EmptyData
from ..preprocess import TransformChain
from .windows import Climatology, Scaler, SupervisedSet, WindowSpec, recursive_predict

# shipped defaults: the best cell of the boosting grid
DEFAULT_TREES = 200
DEFAULT_ETA = 0.01
DEFAULT_DEPTH = 3


@dataclass(eq=False)
class Tree:
    """Flat array tree; ``feature == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feat = self.feature[node]
            inner = feat >= 0
            if not inner.any():
                return self.value[node]
            rows = np.nonzero(inner)[0]
            go_left = X[rows, feat[rows]] < self.threshold[node[rows]]
            node[rows] = np.where(go_left, self.left[node[rows]], self.right[node[rows]])

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature < 0))

    def depth(self) -> int:
        def walk(k):
            if self.feature[k] < 0:
                return 0
            return 1 + max(walk(self.left[k]), walk(self.right[k]))
        return walk(0)

    def to_dict(self) -> dict:
        return {k: getattr(self, k).tolist() for k in ("feature", "threshold", "left", "right", "value")}

    @classmethod
    def from_dict(cls, d) -> "Tree":
        ints = {k: np.array(d[k], dtype=np.int64) for k in ("feature", "left", "right")}
        return cls(ints["feature"], np.array(d["threshold"], dtype=float), ints["left"], ints["right"],
                   np.array(d["value"], dtype=float))


def best_split(X: np.ndarray, g: np.ndarray, h: np.ndarray, lam: float, gamma: float):
    """Exact greedy search; returns ``(gain, feature, threshold)`` or None.

    Ties keep the first candidate in (feature index, sorted position) order.
    """
    G, H = g.sum(), h.sum()
    parent = G * G / (H + lam) if H + lam > 0 else 0.0
    best = None
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        valid = np.nonzero(xs[:-1] < xs[1:])[0]
        if valid.size == 0:
            continue
        GL = np.cumsum(g[order])[valid]
        HL = np.cumsum(h[order])[valid]
        GR, HR = G - GL, H - HL
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = 0.5 * (GL * GL / (HL + lam) + GR * GR / (HR + lam) - parent) - gamma
        gain = np.where(np.isfinite(gain), gain, -np.inf)
        k = int(np.argmax(gain))
        if best is None or gain[k] > best[0]:
            pos = valid[k]
            best = (float(gain[k]), j, 0.5 * (xs[pos] + xs[pos + 1]))
    return best


def grow_tree(X: np.ndarray, g: np.ndarray, h: np.ndarray, max_depth: int,
              lam: float, gamma: float) -> Tree:
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node():
        for lst, v in ((feature, -1), (threshold, 0.0), (left, -1), (right, -1), (value, 0.0)):
            lst.append(v)
        return len(feature) - 1

    def build(idx: np.ndarray, depth: int) -> int:
        k = new_node()
        G, H = g[idx].sum(), h[idx].sum()
        split = best_split(X[idx], g[idx], h[idx], lam, gamma) if depth < max_depth and idx.size > 1 else None
        if split is None or split[0] <= 0.0:
            value[k] = -G / (H + lam) if H + lam > 0 else 0.0
            return k
        _, j, thr = split
        mask = X[idx, j] < thr
        feature[k], threshold[k] = j, thr
        left[k] = build(idx[mask], depth + 1)
        right[k] = build(idx[~mask], depth + 1)
        return k

    build(np.arange(X.shape[0]), 0)
    return Tree(np.array(feature, dtype=np.int64), np.array(threshold), np.array(left, dtype=np.int64),
                np.array(right, dtype=np.int64), np.array(value))


@dataclass(eq=False)
class GbtModel:
    trees: list
    eta: float
    max_depth: int
    gamma: float
    lam: float
    base: float
    spec: WindowSpec | None = None
    scaler: Scaler | None = None
    trace: list = field(default_factory=list)
    chain: TransformChain = field(default_factory=TransformChain)
    climatology: Climatology | None = None

    def predict_normalized(self, Xn: np.ndarray) -> np.ndarray:
        Xn = np.atleast_2d(Xn)
        out = np.full(Xn.shape[0], self.base)
        for tree in self.trees:
            out += self.eta * tree.predict(Xn)
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.scaler.inverse_y(self.predict_normalized(self.scaler.transform_x(X)))

    def to_dict(self) -> dict:
        return {
            "kind": "gbt",
            "trees": [t.to_dict() for t in self.trees],
            "eta": self.eta, "max_depth": self.max_depth, "gamma": self.gamma, "lam": self.lam,
            "base": self.base,
            "spec": None if self.spec is None else self.spec.to_dict(),
            "scaler": None if self.scaler is None else self.scaler.to_dict(),
            "trace": list(self.trace),
            "chain": self.chain.to_dict(),
            "climatology": None if self.climatology is None else self.climatology.to_dict(),
        }

    @classmethod
    def from_dict(cls, d) -> "GbtModel":
        return cls([Tree.from_dict(t) for t in d["trees"]], float(d["eta"]), int(d["max_depth"]),
                   float(d["gamma"]), float(d["lam"]), float(d["base"]),
                   None if d["spec"] is None else WindowSpec.from_dict(d["spec"]),
                   None if d["scaler"] is None else Scaler.from_dict(d["scaler"]),
                   list(d["trace"]), TransformChain.from_dict(d["chain"]),
                   None if d.get("climatology") is None else Climatology.from_dict(d["climatology"]))


def gbt_fit_arrays(X: np.ndarray, y: np.ndarray, n_trees: int = DEFAULT_TREES, eta: float = DEFAULT_ETA,
                   max_depth: int = DEFAULT_DEPTH, gamma: float = 0.0, lam: float = 1.0,
                   base: float | None = None) -> GbtModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise EmptyData("no training samples")
    if not 0.0 < eta <= 1.0:
        raise BadHyperparameter(f"learning rate {eta} must lie in (0, 1]")
    if max_depth < 1 or n_trees < 0:
        raise BadHyperparameter("max_depth must be >= 1 and n_trees >= 0")
    if gamma < 0 or lam < 0:
        raise BadHyperparameter("gamma and lambda must be non-negative")
    base = float(y.mean()) if base is None else float(base)
    pred = np.full(y.size, base)
    h = np.ones(y.size)
    trees, trace = [], [float(np.mean((pred - y) ** 2))]
    for _ in range(n_trees):
        tree = grow_tree(X, pred - y, h, max_depth, lam, gamma)
        pred = pred + eta * tree.predict(X)
        trees.append(tree)
        trace.append(float(np.mean((pred - y) ** 2)))
    return GbtModel(trees, eta, max_depth, gamma, lam, base, trace=trace)


def gbt_fit(data: SupervisedSet, n_trees: int = DEFAULT_TREES, eta: float = DEFAULT_ETA,
            max_depth: int = DEFAULT_DEPTH, gamma: float = 0.0, lam: float = 1.0,
            chain: TransformChain | None = None, climatology: Climatology | None = None) -> GbtModel:
    """Boost on the normalised supervised set."""
    model = gbt_fit_arrays(data.Xn, data.yn, n_trees, eta, max_depth, gamma, lam)
    model.spec, model.scaler = data.spec, data.scaler
    model.chain = chain or TransformChain()
    model.climatology = climatology
    return model


def gbt_forecast(m: GbtModel, s: Series, horizon: int, future_exog=None) -> Forecast:
    preds = recursive_predict(m.predict_normalized, m.spec, m.scaler, s.values, s.end + 1,
                              horizon, future_exog, m.climatology)
    return Forecast(s.end, m.chain.inverse(preds), preds, f"GBT(trees={len(m.trees)})")
