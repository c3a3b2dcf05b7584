import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from terngamma import PreconditionError, ResourceError, generate_standard_family
from terngamma.ideals import check_basis_laws, is_ideal, is_prime, spec, vanishing

from oracles import enumerate_ideals_and_primes, std_tern


@pytest.fixture(scope="module")
def z6():
    return generate_standard_family(6, [1])


@pytest.fixture(scope="module")
def z5():
    return generate_standard_family(5, [1, 2])


# frozen from the subset-scan oracle (see oracles.enumerate_ideals_and_primes)
Z6_IDEALS = [(0,), (0, 3), (0, 2, 4)]
Z6_PRIMES = [(0, 3), (0, 2, 4)]


def test_oracle_agrees_on_z6():
    ideals, primes = enumerate_ideals_and_primes(6, [1], std_tern(6))
    assert ideals == Z6_IDEALS
    assert primes == Z6_PRIMES


def test_is_ideal_zero_ideal(z5):
    assert is_ideal(z5, [0]).verdict


def test_is_ideal_whole_carrier_rejected_but_absorbing(z5):
    v = is_ideal(z5, range(5))
    assert not v.verdict and not v.proper
    assert v.additively_closed and v.absorbing and v.contains_zero


def test_is_ideal_even_subset(z6):
    assert is_ideal(z6, [0, 2, 4]).verdict


def test_is_prime_examples(z6):
    assert is_prime(z6, [0, 2, 4]).verdict
    assert is_prime(z6, [0, 3]).verdict
    v = is_prime(z6, [0])
    assert not v.verdict
    w = v.witness
    assert z6.tern[w["gamma"]][w["a"]][w["b"]][w["c"]] == w["value"]
    assert w["value"] in (0,)


def test_is_prime_requires_ideal(z6):
    with pytest.raises(PreconditionError):
        is_prime(z6, [0, 1])


def test_spec_z5_single_prime(z5):
    sg = spec(z5)
    assert sg.primes == ((0,),)
    # D(a) is the whole spectrum for every nonzero a
    for a in range(1, 5):
        assert sg.basic_opens[a] == (0,)
    assert sg.basic_opens[0] == ()


def test_spec_z6_matches_oracle(z6):
    sg = spec(z6)
    assert list(sg.primes) == Z6_PRIMES
    assert list(sg.ideals) == Z6_IDEALS


def test_spec_singleton_empty():
    sg = spec(generate_standard_family(1, [0]))
    assert sg.primes == ()


def test_spec_carrier_bound():
    T = generate_standard_family(6, [1])
    with pytest.raises(ResourceError):
        spec(T, carrier_bound=4)


def test_basis_laws_z6(z6):
    sg = spec(z6)
    report = check_basis_laws(z6, sg)
    assert report.all_passed
    # D(2) & D(3) = D({2,3,3}_1) = D(0) = empty
    d2 = set(sg.basic_opens[2])
    d3 = set(sg.basic_opens[3])
    assert z6.tern[0][2][3][3] == 0
    assert d2 & d3 == set()


def test_basis_laws_z5(z5):
    assert check_basis_laws(z5, spec(z5)).all_passed


def test_vanishing_zero_ideal_is_everything(z6):
    sg = spec(z6)
    v = vanishing(z6, [0], sg)
    assert set(v.points) == set(range(len(sg.primes)))
    assert v.complement_matches


def test_vanishing_of_prime_is_itself(z6):
    sg = spec(z6)
    v = vanishing(z6, [0, 3], sg)
    assert [sg.primes[i] for i in v.points] == [(0, 3)]
    assert v.complement_matches


def test_vanishing_empty_when_no_prime_contains():
    # Z4 with mode {2}: {0,2} is an ideal but the spectrum is empty
    T = generate_standard_family(4, [2])
    from terngamma import check_axioms

    assert check_axioms(T).all_passed
    sg = spec(T)
    assert sg.primes == ()
    assert is_ideal(T, [0, 2]).verdict
    v = vanishing(T, [0, 2], sg)
    assert v.points == ()
    assert v.complement_matches


@settings(max_examples=20, deadline=None)
@given(n=st.integers(min_value=1, max_value=6), data=st.data())
def test_prime_contrapositive_property(n, data):
    gset = data.draw(
        st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=n)
    )
    T = generate_standard_family(n, gset)
    sg = spec(T)
    for p in sg.primes:
        inside = set(p)
        for g in T.modes():
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        if a not in inside and b not in inside and c not in inside:
                            assert T.tern[g][a][b][c] not in inside


@settings(max_examples=20, deadline=None)
@given(n=st.integers(min_value=1, max_value=6), data=st.data())
def test_spec_output_is_exactly_both_predicates(n, data):
    gset = data.draw(
        st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=n)
    )
    T = generate_standard_family(n, gset)
    sg = spec(T)
    oracle_ideals, oracle_primes = enumerate_ideals_and_primes(
        n, sorted(gset), std_tern(n)
    )
    assert [tuple(p) for p in sg.primes] == oracle_primes
    assert [tuple(i) for i in sg.ideals] == oracle_ideals
    for p in sg.primes:
        assert is_prime(T, p).verdict


def test_union_of_basics_covers_spec(z6):
    sg = spec(z6)
    covered = set()
    for a in range(6):
        covered |= set(sg.basic_opens[a])
    assert covered == set(range(len(sg.primes)))
