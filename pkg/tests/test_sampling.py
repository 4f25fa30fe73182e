from fractions import Fraction

import pytest

from coklab import (Digraph, EntryDistribution, IntMatrix, Rng,
                    balance_parameter, laplacian, named_distribution,
                    sample_digraph, sample_matrix, total_sandpile)
from coklab.sampling import (BadParams, ColumnsNotZeroSum, NonzeroDiagonal,
                             distribution_from_json, distribution_to_json)

F = Fraction


# ---------------------------------------------------------------------------
# entry distributions


def test_distribution_validation():
    with pytest.raises(BadParams):
        EntryDistribution((), ())
    with pytest.raises(BadParams):
        EntryDistribution((0, 0), (F(1, 2), F(1, 2)))
    with pytest.raises(BadParams):
        EntryDistribution((0, 1), (F(1, 2),))
    with pytest.raises(BadParams):
        EntryDistribution((0, 1), (F(1, 2), F(1, 3)))
    with pytest.raises(BadParams):
        EntryDistribution((0, 1), (F(3, 2), F(-1, 2)))


def test_entry_bound():
    d = EntryDistribution((-17, 0, 6), (F(1, 3), F(1, 3), F(1, 3)))
    assert d.entry_bound == 17


def test_named_bernoulli():
    d = named_distribution("bernoulli", q="1/3")
    assert d.support == (0, 1)
    assert d.probabilities == (F(2, 3), F(1, 3))
    with pytest.raises(BadParams):
        named_distribution("bernoulli", q="0")
    with pytest.raises(BadParams):
        named_distribution("bernoulli", q="1")


def test_named_uniform_range():
    d = named_distribution("uniform_range", a=-2, b=2)
    assert d.support == (-2, -1, 0, 1, 2)
    assert all(p == F(1, 5) for p in d.probabilities)
    with pytest.raises(BadParams):
        named_distribution("uniform_range", a=3, b=1)


def test_named_sparse_bernoulli():
    d = named_distribution("sparse_bernoulli", n=100, eps=0.5)
    q = d.probabilities[1]
    assert abs(float(q) - 100 ** -0.5) < 1e-12


def test_named_paper_example():
    d = named_distribution("paper_example", n=50)
    assert d.support == (-17, 0, 6, 7)
    assert sum(d.probabilities) == 1
    with pytest.raises(BadParams):
        named_distribution("paper_example", n=6)
    with pytest.raises(BadParams):
        named_distribution("no_such", x=1)


def test_balance_parameter_values():
    fair = named_distribution("bernoulli", q="1/2")
    assert balance_parameter(fair) == 0.5
    skew = named_distribution("bernoulli", q="1/100")
    assert abs(balance_parameter(skew) - 0.01) < 1e-15
    point = EntryDistribution((0,), (F(1),))
    assert balance_parameter(point) == 0.0
    # paper_example: -17 and 7 share a class mod 2 with mass 5/6, so alpha = 1/6
    d = named_distribution("paper_example", n=50)
    assert abs(balance_parameter(d) - float(F(1, 6))) < 1e-15


def test_balance_detects_residue_merge():
    # masses at 0 and 4 merge mod 2: worst class has mass 1, alpha = 0
    d = EntryDistribution((0, 4), (F(1, 2), F(1, 2)))
    assert balance_parameter(d) == 0.0


def test_draw_frequencies_and_determinism():
    d = named_distribution("bernoulli", q="1/4")
    rng = Rng(11)
    draws = [d.draw(rng) for _ in range(8000)]
    assert set(draws) <= {0, 1}
    assert abs(sum(draws) / 8000 - 0.25) < 0.02
    rng2 = Rng(11)
    assert [d.draw(rng2) for _ in range(100)] == draws[:100]


def test_distribution_json_round_trip():
    d = named_distribution("paper_example", n=50)
    back = distribution_from_json(distribution_to_json(d))
    # the display name is not serialized; the law itself round-trips
    assert back.support == d.support and back.probabilities == d.probabilities
    d2 = distribution_from_json({"kind": "bernoulli", "params": {"q": "1/2"}})
    assert d2 == named_distribution("bernoulli", q="1/2")
    with pytest.raises(BadParams):
        distribution_from_json({"nope": 1})


def test_sample_matrix_shape_and_stream_use():
    d = named_distribution("bernoulli", q="1/2")
    m = sample_matrix(3, 5, d, Rng(0))
    assert m.rows == 3 and m.cols == 5
    # consuming exactly rows*cols words means the next sample is predictable
    rng = Rng(9)
    a = sample_matrix(2, 2, d, rng)
    b = sample_matrix(2, 2, d, rng)
    rng2 = Rng(9)
    flat = [d.draw(rng2) for _ in range(8)]
    assert list(a.entries) + list(b.entries) == flat


# ---------------------------------------------------------------------------
# digraphs, Laplacians, sandpiles


def test_digraph_validation():
    with pytest.raises(NonzeroDiagonal):
        Digraph(2, ((1, 0), (0, 0)))
    with pytest.raises(BadParams):
        Digraph(2, ((0,), (0, 0)))


def test_sample_digraph_edge_probabilities():
    g = sample_digraph(5, F(0), Rng(0))
    assert all(x == 0 for row in g.adjacency for x in row)
    g = sample_digraph(5, F(1), Rng(0))
    assert all(g.adjacency[i][j] == (1 if i != j else 0)
               for i in range(5) for j in range(5))
    g = sample_digraph(40, F(1, 2), Rng(1))
    edges = sum(x for row in g.adjacency for x in row)
    assert abs(edges / (40 * 39) - 0.5) < 0.05


def test_laplacian_columns_sum_to_zero():
    g = sample_digraph(6, F(1, 2), Rng(2))
    lap = laplacian(g.adjacency_matrix())
    for j in range(6):
        assert sum(lap[i, j] for i in range(6)) == 0
    with pytest.raises(NonzeroDiagonal):
        laplacian(IntMatrix.from_rows([[1, 0], [0, 0]]))


def test_total_sandpile_examples():
    # single 2-cycle: L = [[1,-1],[-1,1]], total sandpile trivial
    g = Digraph(2, ((0, 1), (1, 0)))
    assert str(total_sandpile(laplacian(g.adjacency_matrix()))) == "0"
    # bidirected triangle = K3: sandpile group Z/3 (n^(n-2) spanning trees)
    g = Digraph(3, ((0, 1, 1), (1, 0, 1), (1, 1, 0)))
    assert str(total_sandpile(laplacian(g.adjacency_matrix()))) == "Z/3"
    # no edges: Laplacian 0, group Z_0^3 = Z^2
    g = Digraph(3, ((0, 0, 0), (0, 0, 0), (0, 0, 0)))
    c = total_sandpile(laplacian(g.adjacency_matrix()))
    assert c.free_rank == 2 and c.torsion.order == 1
    # one vertex: the zero-sum lattice is trivial
    c = total_sandpile(IntMatrix.from_rows([[0]]))
    assert c.free_rank == 0 and c.torsion.order == 1


def test_total_sandpile_vertex_relabeling_invariance():
    g = sample_digraph(6, F(1, 2), Rng(3))
    base = total_sandpile(laplacian(g.adjacency_matrix()))
    perm = [3, 0, 5, 1, 4, 2]
    rel = [[g.adjacency[perm[i]][perm[j]] for j in range(6)] for i in range(6)]
    relabeled = total_sandpile(laplacian(IntMatrix.from_rows(rel)))
    assert relabeled == base


def test_total_sandpile_rejects_bad_input():
    with pytest.raises(ColumnsNotZeroSum):
        total_sandpile(IntMatrix.from_rows([[1, 0], [0, 1]]))
    with pytest.raises(ColumnsNotZeroSum):
        total_sandpile(IntMatrix.from_rows([[1, 2, 3]]))
