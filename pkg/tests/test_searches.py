import time

import pytest

from levelone import arthur, searches
from levelone.arthur import Block, canonical_name, check_parameter, render
from levelone.basecounts import orthogonal, symplectic

RANK28_SOLUTION = "Δ_{27,23,9,1} ⊕ Δ_{25,13,3} ⊕ Δ_{21,5} ⊕ Δ_{19,7} ⊕ Δ_{17} ⊕ Δ_{15} ⊕ Δ_{11}"


@pytest.fixture(scope="module")
def so25(tables):
    t0 = time.time()
    params = searches.enumerate_so25_trivial(searches.borcherds_blocks(tables))
    return params, time.time() - t0


def test_borcherds_blocks(tables):
    blocks = searches.borcherds_blocks(tables)
    assert len(blocks) == 23
    assert blocks.count(symplectic(23)) == 2
    assert orthogonal(3, 22) in blocks  # Sym² of the weight 11 form
    assert all(b.motivic_weight <= 23 for b in blocks)


def test_so25_count_and_reference(tables, so25):
    params, elapsed = so25
    assert searches.total_choices(params, tables) == 121
    reference = searches.reference_so25()
    assert len(params) == len(reference)
    computed = {canonical_name(line) for line in searches.parameter_lines(params, tables)}
    assert computed == {canonical_name(line) for line in reference}
    assert elapsed < 60


def test_so25_examples(tables, so25):
    names = set(searches.parameter_lines(so25[0], tables))
    assert "[24]" in names
    assert canonical_name("Sym²Δ_{11}[2] ⊕ Δ_{11}[9]") in {canonical_name(n) for n in names}


def test_so25_multiplicities_are_one(so25):
    assert set(searches.multiplicities_so25(so25[0])) == {1}


def test_so25_closed_under_constraints(so25):
    for psi in so25[0]:
        assert not check_parameter(psi), render(psi)
        assert psi.hodge() == tuple(range(23, 0, -2))


def test_reference_lines_parse():
    for line in searches.reference_so25():
        psi, ks = arthur.parse_name(line, arthur.SO25)
        assert not check_parameter(psi), line
        assert all(k >= 1 for k in ks)


def test_search28_is_unique(tables):
    t0 = time.time()
    (sol,) = searches.search_tempered_28(tables)
    assert time.time() - t0 < 60
    assert searches.tempered_name(sol, tables) == RANK28_SOLUTION
    assert all(isinstance(b, Block) and b.d == 1 for b in sol)


def test_no_tempered_solution_below_28(tables):
    gaps = searches.tempered_gaps(tables, upto=27)
    assert set(gaps) == set(range(2, 28))
    assert all(v == 0 for v in gaps.values())
    assert gaps[12] == gaps[24] == 0
