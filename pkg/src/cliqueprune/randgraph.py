"""Erdos-Renyi generation, clique planting, the clique-number predictor, and
corpus builders for the planted-clique training protocol."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classifier import LabeledSet
from .features import FeatureProfile, compute_vertex_features
from .graph import Graph

GENERATOR_NAME = "numpy-pcg64"

MANIFEST_VERSION = 1


def gen_gnp(n, p, seed):
    """G(n, p): every unordered pair is an edge independently with prob p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.size) < p
    pairs = np.column_stack([iu[mask], ju[mask]])
    return Graph.from_edges(n, pairs)


@dataclass(frozen=True)
class PlantedInstance:
    graph: Graph
    planted: frozenset
    n: int
    p: float | None
    k: int
    seed: int


def plant_clique(g, k, seed, p=None):
    """Choose a uniform k-subset and insert its missing internal edges.

    The input graph is left unmodified; a new instance is returned.
    """
    n = g.num_vertices
    if k > n:
        raise ValueError("clique size k cannot exceed the number of vertices")
    if k < 0:
        raise ValueError("k must be non-negative")
    rng = np.random.default_rng(seed)
    members = np.sort(rng.choice(n, size=k, replace=False))
    ii, jj = np.triu_indices(k, k=1)
    clique_pairs = np.column_stack([members[ii], members[jj]])
    base = g.edge_array()
    pairs = np.vstack([base, clique_pairs]) if base.size else clique_pairs
    planted_graph = Graph.from_edges(n, pairs, vertex_labels=g.vertex_labels)
    return PlantedInstance(
        planted_graph, frozenset(int(v) for v in members), n, p, int(k), int(seed)
    )


def expected_clique_number(n, p):
    """Greatest w with C(n, w) * p^C(w,2) >= log(n), natural logarithm.

    Evaluated in log-space via lgamma so large n cannot overflow.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    log_target = math.log(math.log(n))
    log_p = math.log(p)
    best = 0
    for w in range(1, n + 1):
        log_f = (
            math.lgamma(n + 1)
            - math.lgamma(w + 1)
            - math.lgamma(n - w + 1)
            + (w * (w - 1) // 2) * log_p
        )
        if log_f >= log_target:
            best = w
        elif w > 1 and math.log(n - w + 1) - math.log(w) + (w - 1) * log_p < 0:
            # f is decreasing and already below the target: no larger w works
            break
    return best


def build_planted_corpus(n, p, k, min_rows, seed):
    """Generate planted instances until at least ``min_rows`` labeled rows exist.

    Per instance: planted-profile features, the k planted vertices as label-1
    rows, and k uniformly sampled non-members as label-0 rows. No solver call
    is needed; labels come from the planted set. Returns the instances, the
    pooled balanced LabeledSet, and a manifest from which the corpus can be
    regenerated bit-exactly.
    """
    if k > n:
        raise ValueError("clique size k cannot exceed n")
    if k < 1:
        raise ValueError("k must be positive")
    per_instance = 2 * k
    count = max(1, -(-int(min_rows) // per_instance))
    master = np.random.default_rng(seed)
    seeds = master.integers(0, 2**63 - 1, size=(count, 3))
    manifest = {
        "format_version": MANIFEST_VERSION,
        "generator": GENERATOR_NAME,
        "n": int(n),
        "p": float(p),
        "k": int(k),
        "min_rows": int(min_rows),
        "master_seed": int(seed),
        "instances": [
            {
                "name": f"planted-{i:04d}",
                "gnp_seed": int(seeds[i, 0]),
                "plant_seed": int(seeds[i, 1]),
                "negative_seed": int(seeds[i, 2]),
            }
            for i in range(count)
        ],
    }
    return _corpus_from_entries(manifest)


def corpus_from_manifest(manifest):
    """Rebuild a corpus bit-exactly from its manifest."""
    if manifest.get("format_version") != MANIFEST_VERSION:
        raise ValueError("unsupported corpus manifest version")
    return _corpus_from_entries(manifest)


def _corpus_from_entries(manifest):
    n = manifest["n"]
    p = manifest["p"]
    k = manifest["k"]
    profile = FeatureProfile.planted(p)
    instances = []
    rows = []
    labels = []
    sources = []
    for entry in manifest["instances"]:
        g = gen_gnp(n, p, entry["gnp_seed"])
        inst = plant_clique(g, k, entry["plant_seed"], p=p)
        instances.append(inst)
        feats = compute_vertex_features(inst.graph, profile)
        members = np.array(sorted(inst.planted), dtype=np.int64)
        others = np.setdiff1d(np.arange(n, dtype=np.int64), members)
        neg_rng = np.random.default_rng(entry["negative_seed"])
        negatives = np.sort(neg_rng.choice(others, size=k, replace=False))
        rows.append(feats.rows[members])
        rows.append(feats.rows[negatives])
        labels.append(np.ones(k, dtype=np.int64))
        labels.append(np.zeros(k, dtype=np.int64))
        sources.append(entry["name"])
    labeled = LabeledSet(
        rows=np.vstack(rows),
        labels=np.concatenate(labels),
        balanced=True,
        sources=tuple(sources),
    )
    return instances, labeled, manifest
