import pytest

from dpcount import geometry as g


def test_pairing_examples():
    assert g.pairing(g.E[1], g.E[2]) == 1
    assert g.pairing(g.E[1], g.E[1]) == -2
    assert g.pairing(g.E[4], g.E[4]) == -1


def test_pairing_symmetric_bilinear():
    for j in range(1, 10):
        for k in range(1, 10):
            assert g.pairing(g.E[j], g.E[k]) == g.pairing(g.E[k], g.E[j])
            s = g.E[j] + g.E[k]
            assert g.pairing(s, g.E[1]) == g.pairing(g.E[j], g.E[1]) + g.pairing(g.E[k], g.E[1])


def test_adjacency_matches_drawn_edges():
    assert g.adjacency() == g.FIGURE_EDGES
    assert len(g.FIGURE_EDGES) == 11


def test_coprimality_pairs():
    cp = g.coprimality_pairs()
    assert len(cp) == 25
    assert frozenset({1, 3}) in cp
    assert frozenset({7, 8}) not in cp


def test_degree_examples():
    assert g.degree_of_monomial((2, 2, 1, 2, 1, 0, 1, 0, 0)) == g.ANTICANONICAL
    assert g.degree_of_monomial((0,) * 9).is_zero()
    assert g.degree_of_monomial((0, 0, 0, 1, 0, 1, 1, 1, 0)).coeffs == (2, -1, -1, 0, 0, 0)
    with pytest.raises(ValueError):
        g.degree_of_monomial((1, 2))


def test_sections_anticanonical():
    for exps in g.PSI_EXPONENTS:
        assert g.degree_of_monomial(exps) == g.ANTICANONICAL


@pytest.mark.parametrize("i", [1, 2])
def test_height_monomials_log_anticanonical(i):
    target = g.log_anticanonical(i)
    assert len(g.M_EXPONENTS[i]) == {1: 4, 2: 3}[i]
    for exps in g.M_EXPONENTS[i]:
        assert g.degree_of_monomial(exps) == target


def test_boundary_combination_anticanonical():
    assert g.degree_of_monomial((2, 3, 2, 1, 2, 1, 0, 0, 0)) == g.ANTICANONICAL


def test_principal_relations():
    assert g.PRINCIPAL_RELATIONS[0] == (0, 1, 1, -1, 1, 1, -1, 0, 0)
    assert g.PRINCIPAL_RELATIONS[1] == (1, 1, 0, 1, 1, -1, 0, -1, 0)
    for rel in g.PRINCIPAL_RELATIONS:
        assert g.degree_of_monomial(rel).is_zero()


def test_irrelevant_monomials_squarefree():
    assert len(g.IRRELEVANT_MONOMIALS) == 9
    for m in g.IRRELEVANT_MONOMIALS:
        assert set(m) <= {0, 1}


def test_ranks_and_exponents():
    assert (g.pic_rank(1), g.pic_rank(2)) == (3, 2)
    assert (g.b_exponent(1), g.b_exponent(2)) == (5, 4)
    assert g.clemens_faces(1) == [(1, 2), (2, 3)]
    assert g.clemens_faces(2) == [(1, 2), (1, 4), (2, 3)]


def test_height_exponents_drop_boundary():
    for i, ms in g.HEIGHT_EXPONENTS.items():
        for m in ms:
            assert all(m[j - 1] == 0 for j in g.BOUNDARY[i])
