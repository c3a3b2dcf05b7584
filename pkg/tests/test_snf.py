import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from terngamma import InputError
from terngamma.snf import AbelianPresentation, PresentedGroup, smith_normal_form


def _mat_strategy():
    return st.integers(min_value=1, max_value=4).flatmap(
        lambda m: st.integers(min_value=1, max_value=4).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(min_value=-9, max_value=9), min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            )
        )
    )


def test_hand_checkable_2x2():
    snf = smith_normal_form([[2, 0], [0, 3]])
    assert snf.diag == (1, 6)


def test_identity_matrix():
    snf = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert snf.diag == (1, 1, 1)


def test_zero_matrix():
    snf = smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert snf.diag == (0, 0)
    assert snf.rank == 0


def test_rejects_ragged_and_nonint():
    with pytest.raises(InputError):
        smith_normal_form([[1, 2], [3]])
    with pytest.raises(InputError):
        smith_normal_form([[1.5, 2]])


@settings(max_examples=60, deadline=None)
@given(_mat_strategy())
def test_product_identity_and_divisibility(mat):
    snf = smith_normal_form(mat)
    # U * A * V == D re-checked by hand here
    m, n = len(mat), len(mat[0])
    UA = [[sum(snf.U[i][t] * mat[t][j] for t in range(m)) for j in range(n)] for i in range(m)]
    UAV = [[sum(UA[i][t] * snf.V[t][j] for t in range(n)) for j in range(n)] for i in range(m)]
    for i in range(m):
        for j in range(n):
            assert UAV[i][j] == (snf.diag[i] if i == j and i < len(snf.diag) else 0)
    nz = [d for d in snf.diag if d]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


@settings(max_examples=30, deadline=None)
@given(_mat_strategy(), st.integers(min_value=0, max_value=10_000))
def test_invariant_factors_permutation_stable(mat, seed):
    rng = random.Random(seed)
    rows = [list(r) for r in mat]
    rng.shuffle(rows)
    cols = list(range(len(mat[0])))
    rng.shuffle(cols)
    shuffled = [[r[c] for c in cols] for r in rows]
    assert smith_normal_form(mat).diag == smith_normal_form(shuffled).diag


@settings(max_examples=40, deadline=None)
@given(_mat_strategy())
def test_matches_sympy_oracle(mat):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form as sym_snf

    ours = [abs(d) for d in smith_normal_form(mat).diag if d]
    S = sym_snf(sympy.Matrix(mat))
    theirs = sorted(abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0)
    assert sorted(ours) == theirs


# --- presented groups --------------------------------------------------------


def test_presented_group_z6():
    pres = AbelianPresentation(("g",), ((6,),))
    G = PresentedGroup(pres)
    assert G.size == 6
    assert G.nontrivial_invariant_factors() == (6,)
    gen = G.elem_of_vec([1])
    acc = 0
    seen = set()
    for _ in range(6):
        seen.add(acc)
        acc = G.add(acc, gen)
    assert len(seen) == 6 and acc == 0


def test_presented_group_crt():
    pres = AbelianPresentation(("a", "b"), ((2, 0), (0, 3)))
    G = PresentedGroup(pres)
    assert G.size == 6


def test_presented_group_round_trip():
    pres = AbelianPresentation(("a", "b"), ((4, 0), (0, 2)))
    G = PresentedGroup(pres)
    assert G.size == 8
    for e in range(G.size):
        assert G.elem_of_vec(G.vec_of_elem(e)) == e
        assert G.add(e, G.neg(e)) == 0
    # vector addition descends to the group operation
    x, y = [3, 1], [2, 1]
    s = [a + b for a, b in zip(x, y)]
    assert G.elem_of_vec(s) == G.add(G.elem_of_vec(x), G.elem_of_vec(y))


def test_presented_group_lattice_membership():
    pres = AbelianPresentation(("a", "b"), ((2, 2), (0, 4)))
    G = PresentedGroup(pres)
    for row in pres.relations:
        assert G.contains_vec(list(row))
    for row in G.lattice_basis():
        assert G.contains_vec(row)
    assert not G.contains_vec([1, 0]) or G.size == 1


def test_presented_group_rejects_free_rank():
    with pytest.raises(InputError):
        PresentedGroup(AbelianPresentation(("a", "b"), ((2, 0),)))
