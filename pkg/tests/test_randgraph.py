import math

import numpy as np
import pytest

from cliqueprune import (
    build_planted_corpus,
    corpus_from_manifest,
    enumerate_maximum_cliques,
    expected_clique_number,
    gen_gnp,
    is_clique,
    plant_clique,
)
from oracles import rational_expected_clique_number


def test_gnp_extremes():
    assert gen_gnp(10, 0.0, seed=1).num_edges == 0
    assert gen_gnp(10, 1.0, seed=1).num_edges == 45
    assert gen_gnp(0, 0.5, seed=1).num_vertices == 0
    with pytest.raises(ValueError):
        gen_gnp(5, 1.5, seed=1)


def test_gnp_deterministic_per_seed():
    a = gen_gnp(30, 0.3, seed=77)
    b = gen_gnp(30, 0.3, seed=77)
    c = gen_gnp(30, 0.3, seed=78)
    assert a == b
    assert a != c


def test_gnp_edge_count_moments():
    # mean edge count over many seeds within 3 standard errors of the
    # binomial expectation C(64,2)/2
    pairs = math.comb(64, 2)
    counts = [gen_gnp(64, 0.5, seed=s).num_edges for s in range(1000)]
    mean = float(np.mean(counts))
    expected = pairs / 2
    se = math.sqrt(pairs * 0.25 / 1000)
    assert abs(mean - expected) <= 3 * se


def test_plant_clique_examples():
    g = gen_gnp(12, 0.3, seed=4)
    full = plant_clique(g, 12, seed=5)
    assert full.graph.num_edges == math.comb(12, 2)
    one = plant_clique(g, 1, seed=6)
    assert one.graph == g
    assert len(one.planted) == 1
    with pytest.raises(ValueError):
        plant_clique(g, 13, seed=7)


def test_plant_clique_leaves_input_unmodified():
    g = gen_gnp(20, 0.2, seed=8)
    before = g.num_edges
    plant_clique(g, 10, seed=9)
    assert g.num_edges == before


def test_planted_set_is_clique_and_omega_at_least_k():
    inst = plant_clique(gen_gnp(64, 0.5, seed=11), 10, seed=12, p=0.5)
    assert is_clique(inst.graph, inst.planted)
    assert enumerate_maximum_cliques(inst.graph).omega >= 10


def test_expected_clique_number_monotone_in_n():
    values = [expected_clique_number(n, 0.5) for n in (8, 16, 32, 64, 128, 256)]
    assert values == sorted(values)


def test_expected_clique_number_frozen_values():
    # exact evaluations of the log-threshold rule, confirmed by the rational
    # oracle below; the training pairs sit at k >= w + 2
    assert expected_clique_number(64, 0.5) == 8
    assert expected_clique_number(128, 0.5) == 10
    assert expected_clique_number(256, 0.5) == 11
    assert expected_clique_number(512, 0.5) == 13
    assert expected_clique_number(1024, 0.5) == 15
    for n, k in ((64, 10), (128, 12), (256, 13), (512, 15)):
        assert k >= expected_clique_number(n, 0.5) + 2


def test_expected_clique_number_matches_rational_oracle():
    # exhaustive at the canonical density, sampled at the others
    for n in range(2, 257):
        assert expected_clique_number(n, 0.5) == rational_expected_clique_number(
            n, 0.5
        ), n
    for n in (2, 3, 5, 8, 13, 21, 50, 100, 200, 256):
        for p in (0.2, 0.35, 0.75, 0.9):
            assert expected_clique_number(n, p) == rational_expected_clique_number(
                n, p
            ), (n, p)


def test_corpus_shape_and_labels():
    instances, labeled, manifest = build_planted_corpus(
        64, 0.5, 10, min_rows=2000, seed=13
    )
    assert len(instances) == 100
    assert len(labeled) == 2000
    assert labeled.balanced
    for i in range(len(instances)):
        block = labeled.labels[20 * i : 20 * (i + 1)]
        assert block.sum() == 10 and block.size == 20
    assert manifest["generator"] == "numpy-pcg64"
    assert len(manifest["instances"]) == 100


def test_corpus_regenerates_bit_exactly_from_manifest():
    instances, labeled, manifest = build_planted_corpus(
        32, 0.5, 6, min_rows=120, seed=14
    )
    instances2, labeled2, _ = corpus_from_manifest(manifest)
    assert len(instances2) == len(instances)
    for a, b in zip(instances, instances2):
        assert a.graph == b.graph
        assert a.planted == b.planted
    assert np.array_equal(labeled.rows, labeled2.rows)
    assert np.array_equal(labeled.labels, labeled2.labels)


def test_corpus_manifest_version_checked():
    _, _, manifest = build_planted_corpus(16, 0.5, 4, min_rows=8, seed=1)
    manifest["format_version"] = 99
    with pytest.raises(ValueError):
        corpus_from_manifest(manifest)
