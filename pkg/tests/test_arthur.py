from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _fixtures import read_numeric, read_partitions
from levelone import arthur, pipeline
from levelone.arthur import (SO7, SO8, SO9, ArthurParameter, Block, check_parameter, endoscopic_partition,
                             enumerate_parameters, enumerate_shapes, epsilon_psi_signs, inf_char,
                             multiplicity, parse_name, render, rho_vee_signs, siegel_genus3_dim)
from levelone.basecounts import (ORTHOGONAL, SYMPLECTIC, TRIVIAL, TRIVIAL_LABEL, CountTables, MissingCount,
                                 orthogonal, parity_ok, symplectic)


def psi_of(group, text):
    return parse_name(text, group)[0]


def half(*xs):
    return sorted((F(x, 2) for x in xs), reverse=True)


# ------------------------------------------------------------ parameters

def test_inf_char_examples():
    assert inf_char(psi_of(SO7, "[6]")) == half(5, 3, 1, -1, -3, -5)
    assert Block(symplectic(11), 3).eigenvalues2() == [13, 11, 9, -9, -11, -13]
    assert inf_char(psi_of(SO7, "Sym²Δ_{11}[2]")) == half(23, 21, 1, -1, -21, -23)


def test_parameter_constraints():
    assert not check_parameter(psi_of(SO7, "Δ_{17} ⊕ [4]"))
    assert check_parameter(psi_of(SO7, "Δ_{17} ⊕ [3]"))  # wrong sign and wrong total
    assert check_parameter(ArthurParameter(SO7, (Block(symplectic(11)), Block(symplectic(11)),
                                                 Block(symplectic(11)))))
    # even orthogonal blocks for SO8 need rank divisible by 4
    bad = ArthurParameter(SO8, (Block(orthogonal(6, 22, 14, 6)), Block(TRIVIAL_LABEL, 1),
                                Block(TRIVIAL_LABEL, 1)))
    assert any("divisible by 4" in problem for problem in check_parameter(bad))


def test_enumerate_parameters_examples(tables):
    got = {render(p): c for p, c in enumerate_parameters(SO7, (13, 11, 9), tables)}
    assert got["Δ_{13,11,9}"] == 0 and got["Δ_{13} ⊕ Δ_{11} ⊕ Δ_{9}"] == 0
    assert {k: c for k, c in got.items() if c} == {"Δ_{11}[3]": 1}
    assert "[6]" in {render(p) for p, _ in enumerate_parameters(SO7, (5, 3, 1), tables)}
    with pytest.raises(MissingCount):
        enumerate_parameters(SO7, (13, 11, 9), CountTables())


def test_enumerate_parameters_so9_example(tables):
    parts = endoscopic_partition(SO9, (27, 23, 9, 1), tables)
    assert sorted((name, c) for name, _, c in parts) == sorted(
        [("Δ_{27,23,9}^2 ⊕ [2]", 2), ("Δ_{27}^2 ⊕ Δ_{23,9} ⊕ [2]", 2), ("Δ_{27,23,9,1}", 1)])
    assert sum(m * c for _, m, c in parts) == tables.m["SO9"][27, 23, 9, 1] == 5


def test_structural_enumeration_is_capped():
    with pytest.raises(ValueError):
        enumerate_shapes(arthur.SO25, tuple(range(23, 0, -2)))


# ------------------------------------------------------- multiplicities

def test_rho_examples():
    for a, c, b in [(23, 15, 7), (23, 17, 7)]:
        good = psi_of(SO7, f"Δ_{{{a},{b}}} ⊕ Δ_{{{c}}}")
        assert rho_vee_signs(good)[0] == 1
    bad = psi_of(SO7, "Δ_{23,7} ⊕ Δ_{25}")
    assert rho_vee_signs(bad)[1] == -1  # the rank 4 block sits at positions 2 and 3
    assert rho_vee_signs(psi_of(SO7, "Δ_{23,9} ⊕ [2]"))[0] == -1
    assert rho_vee_signs(psi_of(SO9, "Δ_{11}[3] ⊕ Δ_{19}"))[1] == 1
    assert rho_vee_signs(psi_of(SO9, "Δ_{19}[3] ⊕ Δ_{11}"))[0] == -1


def test_epsilon_psi_examples():
    psi = psi_of(SO7, "Δ_{23,9} ⊕ [2]")
    assert epsilon_psi_signs(psi) == [-1, -1]  # i^24 * i^10
    assert epsilon_psi_signs(psi_of(SO7, "Δ_{23,7} ⊕ Δ_{15}")) == [1, 1]
    assert epsilon_psi_signs(psi_of(SO9, "Δ_{11}[3] ⊕ Δ_{19}")) == [1, 1]


def test_multiplicity_examples():
    assert multiplicity(psi_of(SO7, "Δ_{17} ⊕ [4]")) == 1
    assert multiplicity(psi_of(SO7, "Δ_{19} ⊕ [4]")) == 0
    assert multiplicity(psi_of(SO7, "Δ_{23} ⊕ Δ_{17} ⊕ Δ_{11}")) == 0


@given(st.integers(2, 30))
def test_g2_nontempered_multiplicity(k):
    a = 2 * k + 1
    # pi_a[2] + [3] has Hodge weights (a + 1, a - 1, 2)
    (p,) = [p for p in arthur.g2_shapes(a - 1, 2) if p.kind == "nontempered2"]
    assert arthur.g2_multiplicity(p, a - 1, 2) == (1 if a % 4 == 1 else 0)


def so7_case_multiplicity(psi: ArthurParameter) -> int:
    """Multiplicity from the case-by-case description of SO7 parameters."""
    blocks = psi.blocks
    if len(blocks) == 1:
        return 1
    ranks = sorted((b.n for b in blocks), reverse=True)
    if ranks == [4, 2]:
        big = next(b for b in blocks if b.n == 4)
        small = next(b for b in blocks if b.n == 2)
        if big.d == 1 and small.d == 1:
            (c,) = small.label.hodge
            a, b = big.label.hodge
            return int(a > c > b)
        if big.d == 1 and small.label.duality == TRIVIAL:
            w1, w2 = big.label.hodge
            return int((w1 + w2) % 4 == 0)
        if big.label.duality == TRIVIAL and small.d == 1:
            return int(small.label.hodge[0] % 4 == 1)
    if ranks == [2, 2, 2]:
        if all(b.d == 1 for b in blocks):
            return 0
        w1, w2 = sorted((b.label.hodge[0] for b in blocks if b.d == 1), reverse=True)
        return int(w1 % 4 == 1 and w2 % 4 == 3)
    raise AssertionError(f"unexpected shape {render(psi)}")


def test_multiplicity_agrees_with_case_list():
    seen = 0
    for w in pipeline.hodge_grid("SO7", 29):
        for psi in enumerate_shapes(SO7, w):
            assert multiplicity(psi, w) == so7_case_multiplicity(psi), render(psi)
            seen += 1
    assert seen > 1000


def _closed_form_rho(psi, w):
    """Closed forms of rho-check on each block, by the shape of the block."""
    r = len(w)
    pos = {x: j + 1 for j, x in enumerate(w) if x > 0}
    out = []
    for b in psi.blocks:
        d, ri = b.d, b.label.n
        n = ri * d
        if d % 2 == 0 and (ri % 2 == 0 or psi.group.sign == 1):
            out.append((-1) ** (n // 4))
        elif d % 2 == 0:
            s = (-1) ** ((ri // 2) * (d // 2))
            out.append(-s if (d // 2) % 4 in (1, 2) else s)
        else:
            parity = r % 2 if psi.group.sign == -1 else (r - 1) % 2
            # an odd d keeps the Hodge weights of pi at the centre of the block
            central = [pos[h] for h in b.label.hodge if h > 0] + ([r] if 0 in b.label.hodge else [])
            out.append((-1) ** sum(1 for j in central if j % 2 == parity))
    return out


@pytest.mark.parametrize("group,max_w1", [("SO7", 29), ("SO9", 27), ("SO8", 30)])
def test_rho_closed_forms(group, max_w1):
    spec = arthur.group_spec(group)
    checked = 0
    for w in pipeline.hodge_grid(group, max_w1):
        for psi in enumerate_shapes(spec, w):
            # odd rank blocks of SO8 are not generators of the centralizer
            even = [i for i, b in enumerate(psi.blocks) if b.n % 2 == 0]
            generic, closed = rho_vee_signs(psi, w), _closed_form_rho(psi, w)
            assert [generic[i] for i in even] == [closed[i] for i in even], render(psi)
            checked += 1
    assert checked > 1000


def test_trivial_block_rho():
    # rank one blocks [d], d even: (-1)^(d/2), flipped when d/2 is 1 or 2 mod 4
    assert rho_vee_signs(psi_of(SO7, "Δ_{23,9} ⊕ [2]"))[1] == -1
    assert rho_vee_signs(psi_of(SO7, "Δ_{17} ⊕ [4]"))[1] == -1
    assert rho_vee_signs(psi_of(SO9, "Δ_{11} ⊕ [6]"))[1] == 1
    assert rho_vee_signs(psi_of(SO9, "[8]")) == [1]


# ---------------------------------------------------------- extraction

def test_extraction_examples(tables):
    assert tables.count(symplectic(23, 13, 5)) == 1
    assert tables.count(symplectic(27, 23, 9)) == 2
    assert tables.m["SO7"][27, 23, 9] == 4
    assert tables.count(orthogonal(8, 24, 18, 10, 4)) == 1
    assert tables.g2[16, 8] == 1


def _nonzero(tables, n, duality):
    return {l.hodge: v for l, v in tables.counts.items() if v and l.n == n and l.duality == duality}


def _assert_table(computed, reference, in_range):
    """Equal inside the range; reference rows beyond it are checked one by one."""
    assert {k: v for k, v in computed.items() if in_range(k)} == \
        {k: v for k, v in reference.items() if in_range(k)}
    extra = [k for k in reference if not in_range(k)]
    assert [computed.get(k) for k in extra] == [reference[k] for k in extra]


def test_symplectic_rank6_table(tables):
    _assert_table(_nonzero(tables, 6, SYMPLECTIC), read_numeric("s3_counts.txt"), lambda w: w[0] <= 29)


def test_symplectic_rank8_table(tables):
    # the reference listing stops after 144 cells, in lexicographic order
    reference = read_numeric("s4_counts.txt")
    assert len(reference) == 144
    computed = {w: v for w, v in _nonzero(tables, 8, SYMPLECTIC).items() if w[0] <= 27}
    prefix = sorted(computed)[:144]
    assert {w: computed[w] for w in prefix} == reference
    assert len(computed) >= 144


def test_orthogonal_rank8_table(tables):
    _assert_table({w: v for w, v in _nonzero(tables, 8, ORTHOGONAL).items() if w[3] > 0},
                  read_numeric("o4_counts.txt"), lambda w: w[0] <= 30)


def test_combined_table(tables):
    computed = {w + (0,): v for w, v in tables.combined.items() if v}
    _assert_table(computed, read_numeric("o4_zero_combined.txt"), lambda w: w[0] <= 34)


def test_g2_table(tables):
    computed = {w: v for w, v in tables.g2.items() if v}
    _assert_table(computed, read_numeric("g2_counts.txt"), lambda w: sum(w) <= 58)


def test_g2_short_factor_is_shared(tables):
    # counting the short factor twice only matters once S(w_s) > 1, first at w = 46
    dims = tables.m["G2"]
    changed = sorted(k for k in dims if arthur.g2_known_contribution(*k) !=
                     arthur.g2_known_contribution(*k, shared_short=False))
    assert changed and min(w for w, _ in changed) == 46
    assert all(sum(k) > 46 for k in changed)
    assert all(sum(k) > 56 or k not in read_numeric("g2_counts.txt") or
               read_numeric("g2_counts.txt")[k] == tables.g2[k] for k in changed)


def test_extracted_parity_zeros(tables):
    for label, v in tables.counts.items():
        if label.duality == ORTHOGONAL and not parity_ok(label.hodge):
            assert v == 0, label


def test_negative_residual_is_an_error():
    t = CountTables()
    with pytest.raises(arthur.NegativeResidual):
        arthur.extract_counts(SO7, {(13, 11, 9): 0}, t)


def test_so8_combined_resolution(tables):
    for w, c in tables.combined.items():
        label = orthogonal(7, *w)
        if c <= 1:
            assert tables.count(label) == c
        else:
            assert tables.bounds(label) == (c % 2, c)


# ---------------------------------------------------------- partitions

def _partition_names(group, w, tables):
    return sorted(arthur.canonical_name(name) for name, _, _ in endoscopic_partition(group, w, tables))


@pytest.mark.parametrize("group,fixture,max_w1", [(SO7, "so7_partitions.txt", 25),
                                                  (SO9, "so9_partitions.txt", 23)])
def test_partitions_match_reference(tables, group, fixture, max_w1):
    reference = {w: sorted(arthur.canonical_name(p) for p in ps)
                 for w, ps in read_partitions(fixture).items()}
    computed = {}
    for w in pipeline.hodge_grid(group.name, max_w1):
        names = _partition_names(group, w, tables)
        if names:
            computed[w] = names
    extra = [w for w in reference if w[0] > max_w1]
    for w in extra:
        computed[w] = _partition_names(group, w, tables)
    assert computed == reference


def test_partition_examples(tables):
    assert _partition_names(SO7, (23, 21, 1), tables) == ["Sym²Δ_{11}[2]"]
    assert _partition_names(SO9, (7, 5, 3, 1), tables) == ["[8]"]
    parts = endoscopic_partition(SO7, (29, 27, 25), tables)
    assert sorted((n, c) for n, _, c in parts) == [("Δ_{27}^2[3]", 2), ("Δ_{29,25} ⊕ Δ_{27}^2", 2)]
    assert sum(m * c for _, m, c in parts) == tables.m["SO7"][29, 27, 25] == 4


@pytest.mark.parametrize("text", ["Δ_{27,23,9}^2 ⊕ [2]", "Sym²Δ_{11}[2] ⊕ Δ_{11}[9]", "O*_{24,16,8} ⊕ [1]",
                                  r"$\Delta_{21,5} \oplus \Delta_{17}$", "O_{24,18,10,4}"])
def test_names_round_trip(text):
    parsed = parse_name(text)
    again = parse_name(arthur.canonical_name(text))
    assert sorted(parsed) == sorted(again)


def test_bad_names():
    for text in ["Δ_{}", "X_{3}", "⊕"]:
        with pytest.raises(ValueError):
            parse_name(text)


# ---------------------------------------------------------- genus three

def test_genus3_examples(tables):
    assert siegel_genus3_dim(24, 16, 8, tables) == (1, 1)
    assert siegel_genus3_dim(26, 20, 6, tables) == (1, 1)
    assert siegel_genus3_dim(6, 4, 2, tables) == (0, 0)
    with pytest.raises(ValueError):
        siegel_genus3_dim(6, 6, 2, tables)


def test_genus3_resolved_below_27(tables):
    for w in pipeline.hodge_grid("SO8", 26):
        if w[-1] == 0 and w[2] > 0:
            lo, hi = siegel_genus3_dim(*w[:3], tables)
            assert lo == hi >= 0
