"""Balanced training-set construction and a from-scratch logistic classifier.

Training is stochastic gradient descent on L2-regularized log-loss with
per-epoch seeded shuffling, so a fixed seed gives a bit-identical model.
Columns are standardized at train time and the scaling parameters travel
with the model.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateLabelsError
from .features import FeatureProfile, VERTEX_FEATURE_NAMES

MODEL_FORMAT_VERSION = 1

_PROB_CLAMP = 1e-15


@dataclass(frozen=True, eq=False)
class LabeledSet:
    """Feature rows with 0/1 labels (1 = vertex of some maximum clique)."""

    rows: np.ndarray
    labels: np.ndarray
    balanced: bool = False
    sources: tuple = ()

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[0] != self.labels.shape[0]:
            raise ValueError("rows and labels must align")
        if not np.all(np.isin(self.labels, (0, 1))):
            raise ValueError("labels must be 0 or 1")
        if self.balanced and int(self.labels.sum()) * 2 != self.labels.size:
            raise ValueError("set marked balanced but class counts differ")

    def __len__(self):
        return self.labels.size


def build_training_set(g, mce, feats, seed, source=""):
    """Label vertices by maximum-clique membership and under-sample the
    larger class to the smaller one (uniformly, seeded)."""
    n = g.num_vertices
    if feats.rows.shape[0] != n:
        raise ValueError("feature matrix does not match the graph")
    positive = np.zeros(n, dtype=bool)
    positive[sorted(mce.vertex_union())] = True
    pos_idx = np.flatnonzero(positive)
    neg_idx = np.flatnonzero(~positive)
    if pos_idx.size == 0 or neg_idx.size == 0:
        raise DegenerateLabelsError(
            "instance has a single class; cannot build a balanced set"
        )
    rng = np.random.default_rng(seed)
    if pos_idx.size > neg_idx.size:
        pos_idx = np.sort(rng.choice(pos_idx, size=neg_idx.size, replace=False))
    elif neg_idx.size > pos_idx.size:
        neg_idx = np.sort(rng.choice(neg_idx, size=pos_idx.size, replace=False))
    chosen = np.sort(np.concatenate([pos_idx, neg_idx]))
    labels = positive[chosen].astype(np.int64)
    return LabeledSet(
        rows=feats.rows[chosen],
        labels=labels,
        balanced=True,
        sources=(source,) if source else (),
    )


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Logistic model: weights, bias, and the train-time column scaling."""

    weights: np.ndarray
    bias: float
    scale_mean: np.ndarray
    scale_std: np.ndarray
    feature_kind: str = "vertex"
    profile: FeatureProfile = field(default_factory=FeatureProfile.real)
    hyperparams: dict = field(default_factory=dict)
    corpus_digest: str = ""

    def _scaled(self, rows):
        rows = np.asarray(rows, dtype=np.float64)
        single = rows.ndim == 1
        mat = rows.reshape(1, -1) if single else rows
        if mat.shape[1] != self.weights.size:
            raise ValueError(
                f"expected width {self.weights.size}, got {mat.shape[1]}"
            )
        return (mat - self.scale_mean) / self.scale_std, single

    def predict_p1(self, rows):
        """P(label = 1), clamped to the open interval (0, 1)."""
        mat, single = self._scaled(rows)
        z = mat @ self.weights + self.bias
        s = np.clip(_sigmoid(z), _PROB_CLAMP, 1.0 - _PROB_CLAMP)
        return float(s[0]) if single else s

    def predict_p0(self, rows):
        """P(label = 0) = 1 - predict_p1, an exact complement."""
        p1 = self.predict_p1(rows)
        return 1.0 - p1

    def to_json_dict(self):
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "feature_kind": self.feature_kind,
            "profile": self.profile.to_dict(),
            "weights": [float(w) for w in self.weights],
            "bias": float(self.bias),
            "scale_mean": [float(x) for x in self.scale_mean],
            "scale_std": [float(x) for x in self.scale_std],
            "hyperparams": self.hyperparams,
            "corpus_digest": self.corpus_digest,
        }

    def save(self, target):
        text = json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"
        if isinstance(target, (str, Path)):
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            target.write(text)

    @classmethod
    def from_json_dict(cls, d):
        if d.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(
                f"unsupported model format version {d.get('format_version')!r}"
            )
        return cls(
            weights=np.array(d["weights"], dtype=np.float64),
            bias=float(d["bias"]),
            scale_mean=np.array(d["scale_mean"], dtype=np.float64),
            scale_std=np.array(d["scale_std"], dtype=np.float64),
            feature_kind=d["feature_kind"],
            profile=FeatureProfile.from_dict(d["profile"]),
            hyperparams=d.get("hyperparams", {}),
            corpus_digest=d.get("corpus_digest", ""),
        )

    @classmethod
    def load(cls, source):
        if isinstance(source, (str, Path)):
            with open(source, "r", encoding="utf-8") as fh:
                return cls.from_json_dict(json.load(fh))
        return cls.from_json_dict(json.load(source))


def _sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _pool(sets):
    if isinstance(sets, LabeledSet):
        sets = [sets]
    sets = list(sets)
    if not sets:
        raise ValueError("no training data")
    rows = np.vstack([s.rows for s in sets])
    labels = np.concatenate([s.labels for s in sets])
    if rows.size == 0:
        raise ValueError("no training data")
    if not np.all(np.isfinite(rows)):
        raise ValueError("non-finite feature value in training data")
    return rows, labels


def train(sets, epochs=400, l2=1e-4, lr0=0.01, seed=0, feature_kind="vertex",
          profile=None):
    """Fit the logistic model with seeded SGD.

    The learning rate decays as lr0 / sqrt(epoch). Constant columns are
    recorded with standard deviation 1 so scaling never divides by zero.
    """
    rows, labels = _pool(sets)
    mean = rows.mean(axis=0)
    std = rows.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    x = (rows - mean) / std
    y = labels.astype(np.float64)
    d = x.shape[1]
    w = np.zeros(d, dtype=np.float64)
    b = 0.0
    rng = np.random.default_rng(seed)
    for epoch in range(1, epochs + 1):
        lr = lr0 / math.sqrt(epoch)
        for i in rng.permutation(y.size):
            z = float(x[i] @ w) + b
            if z >= 0:
                pred = 1.0 / (1.0 + math.exp(-z))
            else:
                ez = math.exp(z)
                pred = ez / (1.0 + ez)
            gmult = pred - y[i]
            w -= lr * (gmult * x[i] + l2 * w)
            b -= lr * gmult
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(rows).tobytes())
    digest.update(np.ascontiguousarray(labels).tobytes())
    if profile is None:
        profile = FeatureProfile.real()
    return LinearModel(
        weights=w,
        bias=b,
        scale_mean=mean,
        scale_std=std,
        feature_kind=feature_kind,
        profile=profile,
        hyperparams={
            "epochs": int(epochs),
            "l2": float(l2),
            "lr0": float(lr0),
            "lr_schedule": "lr0/sqrt(epoch)",
            "seed": int(seed),
        },
        corpus_digest=digest.hexdigest(),
    )


def log_loss(model, rows, labels):
    """Mean binary cross-entropy of the model on the given rows."""
    p1 = np.atleast_1d(model.predict_p1(rows))
    y = np.asarray(labels, dtype=np.float64)
    return float(-np.mean(y * np.log(p1) + (1.0 - y) * np.log(1.0 - p1)))


def accuracy(model, rows, labels):
    p1 = np.atleast_1d(model.predict_p1(rows))
    return float(np.mean((p1 >= 0.5).astype(np.int64) == np.asarray(labels)))


def coefficient_report(model, names=None):
    """Per-feature weights sorted by descending magnitude."""
    if names is None:
        names = VERTEX_FEATURE_NAMES if model.feature_kind == "vertex" else tuple(
            f"E{i}" for i in range(1, 10)
        )
    pairs = list(zip(names, (float(w) for w in model.weights)))
    return sorted(pairs, key=lambda kv: abs(kv[1]), reverse=True)
