import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paritylab.errors import InvalidArgument, ParseError
from paritylab.graph import (
    PlantedInstance,
    SignGraph,
    common_neighbors,
    degree_within,
    edge_sign,
    is_clique,
    plant_clique,
    planted_instance,
    read_instance,
    sample_gnp_half,
    write_instance,
)

from conftest import DATA, complete_graph


def test_single_vertex():
    g = sample_gnp_half(1, 123)
    assert g.n == 1
    assert g.signs.tolist() == [[1]]


def test_zero_vertices_rejected():
    with pytest.raises(InvalidArgument):
        sample_gnp_half(0, 1)


def test_sampling_is_deterministic():
    assert sample_gnp_half(300, 11) == sample_gnp_half(300, 11)
    assert sample_gnp_half(300, 11) != sample_gnp_half(300, 12)


def test_edge_density_n2000():
    # 1,999,000 fair coins; Hoeffding: P(|frac - 1/2| > 0.01) <= 2 exp(-2 * 1999000 * 1e-4) ~ 1e-173
    g = sample_gnp_half(2000, 7)
    off = g.adjacency[np.triu_indices(2000, 1)]
    assert 0.49 <= off.mean() <= 0.51


@pytest.mark.parametrize("n", [1, 2, 5, 17, 64])
def test_symmetry_and_diagonal_exhaustive(n):
    for seed in range(5):
        E = sample_gnp_half(n, seed).signs
        assert np.array_equal(E, E.T)
        assert np.all(np.diag(E) == 1)


def test_symmetry_spot_checks_large():
    g = sample_gnp_half(700, 3)
    rng = np.random.default_rng(0)
    for i, j in rng.integers(0, 700, size=(500, 2)):
        assert edge_sign(g, i, j) == edge_sign(g, j, i)


def test_plant_whole_graph_is_complete():
    inst = plant_clique(sample_gnp_half(12, 1), 12, 5)
    assert np.all(inst.graph.signs == 1)


def test_plant_singleton_leaves_graph():
    g = sample_gnp_half(40, 1)
    assert plant_clique(g, 1, 9).graph == g


@pytest.mark.parametrize("p", [0, 41])
def test_plant_rejects_bad_size(p):
    with pytest.raises(InvalidArgument):
        plant_clique(sample_gnp_half(40, 1), p, 0)


def test_planting_touches_only_clique_pairs():
    for seed in range(100):
        g = sample_gnp_half(30, seed)
        inst = plant_clique(g, 1 + seed % 30, seed + 1000)
        assert inst.p == 1 + seed % 30
        assert is_clique(inst.graph, inst.clique)
        inside = np.zeros(30, dtype=bool)
        inside[inst.clique] = True
        outside = ~np.outer(inside, inside)
        assert np.array_equal(inst.graph.signs[outside], g.signs[outside])


def test_planted_instance_deterministic():
    assert planted_instance(200, 20, 4) == planted_instance(200, 20, 4)


def test_edge_sign_fixture(path3):
    assert edge_sign(path3, 0, 2) == -1
    assert edge_sign(path3, 0, 1) == 1
    assert edge_sign(path3, 2, 2) == 1


def test_edge_sign_range():
    g = sample_gnp_half(5, 0)
    assert edge_sign(g, 3, 3) == 1
    with pytest.raises(InvalidArgument):
        edge_sign(g, 0, 5)


def test_common_neighbors_cases(path3):
    assert common_neighbors(path3, []).tolist() == [0, 1, 2]
    assert common_neighbors(path3, [0, 2]).tolist() == [1]
    assert common_neighbors(complete_graph(6), [1, 4]).tolist() == list(range(6))


def test_common_neighbors_contain_clique():
    rng = np.random.default_rng(1)
    inst = planted_instance(400, 40, 2)
    for _ in range(100):
        q1 = rng.choice(inst.clique, size=rng.integers(1, 41), replace=False)
        assert set(inst.clique.tolist()) <= set(common_neighbors(inst.graph, q1).tolist())


@given(st.integers(0, 2**32 - 1), st.lists(st.integers(0, 24), max_size=6))
@settings(max_examples=60, deadline=None)
def test_common_neighbors_brute_force(seed, Q):
    g = sample_gnp_half(25, seed)
    expected = [v for v in range(25) if all(edge_sign(g, v, q) == 1 for q in Q)]
    assert common_neighbors(g, Q).tolist() == expected


def test_degree_within(path3):
    assert degree_within(path3, 1, []) == 0
    assert degree_within(path3, 1, [0, 2]) == 2
    assert degree_within(complete_graph(9), 3, [0, 1, 2, 3, 4]) == 4


def test_is_clique(path3):
    assert is_clique(path3, [])
    assert is_clique(path3, [2])
    assert is_clique(path3, [0, 1])
    assert not is_clique(path3, [0, 1, 2])


def test_file_round_trip(tmp_path):
    inst = planted_instance(37, 6, 8)
    write_instance(tmp_path / "a.txt", inst)
    assert read_instance(tmp_path / "a.txt") == inst
    write_instance(tmp_path / "b.txt", inst.graph)
    back = read_instance(tmp_path / "b.txt")
    assert isinstance(back, SignGraph) and back == inst.graph


def test_file_row_convention():
    g = read_instance(DATA / "spec_rows.txt")
    assert isinstance(g, SignGraph)
    assert edge_sign(g, 1, 0) == 1
    assert edge_sign(g, 2, 0) == 1
    assert edge_sign(g, 2, 1) == -1


@pytest.mark.parametrize(
    "text, line",
    [
        ("m=3\n1\n01\n", 1),
        ("n=3\n1\n012\n", 3),
        ("n=3\n1\n0x\n", 3),
        ("n=3\n1\n", 2),
        ("n=3\n1\n01\nP=0,2\n", 4),
        ("n=3\n1\n01\nP=1,0\n", 4),
    ],
)
def test_malformed_files(tmp_path, text, line):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    with pytest.raises(ParseError) as err:
        read_instance(f)
    assert err.value.line == line


def test_packed_storage_size():
    g = sample_gnp_half(100, 0)
    assert g.packed.nbytes == 100 * math.ceil(100 / 8)
    with pytest.raises(ValueError):
        g.adjacency[0, 1] = True
