import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelone import basecounts
from levelone.basecounts import (ArchRep, CountTables, MissingCount, arch_rep, epsilon, epsilon_pair,
                                 orthogonal, parity_ok, parity_vanishes, s1, s2, small_orthogonal,
                                 symplectic, tensor, TRIVIAL_LABEL)


def classical_cusp_dimension(k: int) -> int:
    """dim S_k(SL2(Z)) for even k from dim M_k."""
    if k < 12:
        return 0
    dim_m = k // 12 + (0 if k % 12 == 2 else 1)
    return dim_m - 1


def test_s1_examples():
    assert (s1(11), s1(13), s1(23)) == (1, 0, 2)
    assert [s1(w) for w in (11, 15, 17, 19, 21, 23, 25, 27)] == [1, 1, 1, 1, 1, 2, 1, 2]
    with pytest.raises(ValueError):
        s1(12)


@given(st.integers(0, 500))
def test_s1_agrees_with_modular_forms(m):
    w = 2 * m + 1
    assert s1(w) == classical_cusp_dimension(w + 1)


def test_s2_examples():
    assert s2(19, 7) == 1
    assert s2(29, 25) == 1
    assert s2(17, 5) == 0
    with pytest.raises(MissingCount):
        s2(47, 3)
    with pytest.raises(MissingCount):
        s2(45, 29)
    with pytest.raises(ValueError):
        s2(20, 7)


def test_s2_small_weights_are_rare():
    nonzero = [(w, v) for w in range(3, 24, 2) for v in range(1, w, 2) if s2(w, v)]
    assert nonzero == [(19, 7), (21, 5), (21, 9), (21, 13), (23, 7), (23, 9), (23, 13)]


def test_s2_provider_extends_range():
    try:
        basecounts.set_s2_provider(lambda w, v: 7)
        assert s2(51, 3) == 7
        assert s2(19, 7) == 1
    finally:
        basecounts.set_s2_provider(None)


def test_small_orthogonal_examples():
    assert small_orthogonal("Ostar1", (22,)) == s1(11) == 1
    # S(23) = 2 gives one unordered pair
    assert small_orthogonal("O2", (46, 0)) == 1
    assert small_orthogonal("Ostar2", (26, 12)) == s2(19, 7) == 1
    assert small_orthogonal("Ostar1", (24,)) == 0  # fails the parity criterion
    with pytest.raises(ValueError):
        small_orthogonal("O2", (23, 1))


def test_arch_rep_examples():
    assert arch_rep(symplectic(11)) == ArchRep((11,))
    assert arch_rep(orthogonal(3, 22)) == ArchRep((22,), 0, 1)
    assert arch_rep(orthogonal(5, 22, 10)) == ArchRep((22, 10), 1, 0)
    assert arch_rep(TRIVIAL_LABEL) == ArchRep((), 1, 0)
    assert arch_rep(orthogonal(4, 22, 0)) == ArchRep((22,), 1, 1)


def test_tensor_examples():
    i11 = ArchRep.build([11])
    assert tensor(i11, i11) == ArchRep.build([22], triv=1, sign=1)
    assert tensor(ArchRep.build([3]), ArchRep.build([1])) == ArchRep.build([4, 2])
    assert tensor(ArchRep.build(sign=1), ArchRep.build([5], triv=1)) == ArchRep.build([5], sign=1)
    assert tensor(ArchRep.build(sign=1), ArchRep.build(sign=1)) == ArchRep.build(triv=1)


def test_epsilon_examples():
    assert epsilon(ArchRep.build([17])) == -1
    assert epsilon(ArchRep.build([11])) == 1
    assert epsilon(ArchRep.build(sign=1)) == 1j
    assert epsilon_pair(symplectic(11), TRIVIAL_LABEL) == 1
    assert epsilon_pair(symplectic(17), TRIVIAL_LABEL) == -1


@given(st.integers(0, 40), st.integers(0, 40))
def test_epsilon_of_two_planes(a, b):
    w, v = 2 * a + 1, 2 * b + 1
    rep = tensor(ArchRep.build([w]), ArchRep.build([v]))
    assert epsilon(rep) == (-1) ** (1 + max(w, v))


@given(st.integers(1, 30), st.integers(0, 30))
def test_epsilon_rank3_against_plane(a, b):
    a, b = 2 * a, 2 * b + 1
    assert epsilon_pair(orthogonal(3, a), symplectic(b)) == -(-1) ** ((b + 1) // 2 + max(a, b))


def _labels():
    odd = st.integers(0, 20).map(lambda k: 2 * k + 1)
    even = st.integers(1, 20).map(lambda k: 2 * k)

    def sym(ws):
        return symplectic(*sorted(set(ws), reverse=True))

    def orth(n, ws):
        ws = sorted(set(ws), reverse=True)
        if n % 2 == 0 and len(ws) % 2:
            ws = ws[:-1] or [ws[0], 0]  # rank 2 mod 4 even orthogonal labels never occur
        return orthogonal(2 * len(ws) + (n % 2), *ws)

    return st.one_of(st.just(TRIVIAL_LABEL), st.lists(odd, min_size=1, max_size=3).map(sym),
                     st.tuples(st.sampled_from([0, 1]), st.lists(even, min_size=1, max_size=3))
                     .map(lambda t: orth(*t)))


@given(_labels(), _labels())
def test_epsilon_pair_is_symmetric_and_real(p, q):
    if p.sign != q.sign:
        return  # the product of a symplectic and an orthogonal label is symplectic
    e = epsilon_pair(p, q)
    assert e in (1, -1)
    assert e == epsilon_pair(q, p)


@given(_labels(), _labels(), _labels())
def test_epsilon_is_multiplicative(p, q, r):
    a, b, c = arch_rep(p), arch_rep(q), arch_rep(r)
    lhs = basecounts.epsilon_exponent(tensor(a, b + c))
    rhs = basecounts.epsilon_exponent(tensor(a, b)) + basecounts.epsilon_exponent(tensor(a, c))
    assert lhs == rhs % 4


@given(st.lists(st.integers(1, 20).map(lambda k: 2 * k), min_size=1, max_size=4, unique=True),
       st.booleans())
def test_orthogonal_epsilon_is_one_when_parity_allows(ws, odd):
    ws = sorted(ws, reverse=True)
    if not odd and len(ws) % 2:
        return  # covered by the vanishing test below
    label = orthogonal(2 * len(ws) + odd, *ws)
    if parity_ok(ws):
        assert epsilon_pair(label, TRIVIAL_LABEL) == 1
    else:
        assert parity_vanishes(label)


@given(st.lists(st.integers(0, 20).map(lambda k: 2 * k), min_size=1, max_size=5, unique=True)
       .filter(lambda ws: len(ws) % 2))
def test_odd_length_even_orthogonal_vanishes(ws):
    label = orthogonal(2 * len(ws), *sorted(ws, reverse=True))
    assert CountTables().count(label) == 0


def test_parity_rule_in_tables():
    t = CountTables()
    assert t.count(orthogonal(7, 24, 16, 10)) == 0  # half sum 25 odd, needs even
    with pytest.raises(MissingCount):
        t.count(orthogonal(7, 24, 16, 8))
    with pytest.raises(ValueError):
        t.set(orthogonal(7, 24, 16, 8), -1)


@pytest.mark.parametrize("bad", [(2, "symplectic", (3, 1)), (2, "symplectic", (4,)), (3, "orthogonal", (3,)),
                                 (1, "trivial", (1,)), (4, "symplectic", (3, 5))])
def test_invalid_labels(bad):
    with pytest.raises(ValueError):
        basecounts.CuspidalLabel(bad[0], bad[1], bad[2])
