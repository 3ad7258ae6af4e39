import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from appbench.pauli import (DimensionError, PauliDomainError, PauliString, PauliSum,
                            commutes, conjugate_by_rotation, multiply)

from oracles import pauli_matrix, pauli_sum_matrix, string_matrix

P = PauliString.from_label


def labels(n):
    return st.text(alphabet="IXYZ", min_size=n, max_size=n)


def test_single_qubit_products():
    xy = multiply(P("XI"), P("YI"))
    assert xy.to_label() == "+iZI"
    zz = multiply(P("ZZ"), P("ZZ"))
    assert zz.to_label() == "+II"


def test_xx_times_zz_is_minus_yy():
    # oracle value: dense 4x4 product
    dense = pauli_matrix("XX") @ pauli_matrix("ZZ")
    assert np.allclose(dense, -pauli_matrix("YY"))
    assert multiply(P("XX"), P("ZZ")) == P("-YY")


def test_multiply_matches_dense_oracle_exhaustive_pairs():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        a = P("".join(rng.choice(list("IXYZ"), n)))
        a = PauliString(n, a.x_bits, a.z_bits, int(rng.integers(4)))
        b = P("".join(rng.choice(list("IXYZ"), n)))
        prod = multiply(a, b)
        assert np.array_equal(string_matrix(prod), string_matrix(a) @ string_matrix(b))


@given(labels(3), labels(3), labels(3))
def test_multiply_associative(a, b, c):
    a, b, c = P(a), P(b), P(c)
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(labels(4))
def test_hermitian_square_is_identity(a):
    sq = multiply(P(a), P(a))
    assert sq == PauliString.identity(4)


@pytest.mark.parametrize("a,b,expected", [("X", "Z", False), ("XX", "ZZ", True), ("XI", "ZZ", False)])
def test_commutes_examples(a, b, expected):
    assert commutes(P(a), P(b)) is expected


@given(labels(5), labels(5))
def test_commutes_symmetric_and_matches_dense(a, b):
    pa, pb = P(a), P(b)
    assert commutes(pa, pb) == commutes(pb, pa)
    ma, mb = pauli_matrix(a), pauli_matrix(b)
    assert commutes(pa, pb) == np.allclose(ma @ mb, mb @ ma)


def test_width_mismatch():
    with pytest.raises(DimensionError):
        multiply(P("X"), P("XX"))
    with pytest.raises(DimensionError):
        commutes(P("X"), P("XX"))


def test_label_roundtrip_and_sparse_form():
    p = P("-iXIZY")
    assert p.phase_exp == 3 and p.to_label() == "-iXIZY"
    z62 = PauliString.from_label("Z62", 127)
    assert z62.support() == [62] and z62.letter(62) == "Z" and z62.weight == 1
    assert PauliString.from_label("X0 Y3", 4) == P("XIIY")
    assert P("IIII").weight == 0 and P("+IIII").is_hermitian


def test_hermitian_predicate():
    assert P("XY").is_hermitian
    assert not P("iXY").is_hermitian
    assert np.allclose(string_matrix(P("-XY")), string_matrix(P("-XY")).conj().T)


def _sum(d, n):
    return PauliSum(n, {(P(k).x_bits, P(k).z_bits): v for k, v in d.items()})


def test_conjugate_commuting_term_unchanged():
    obs = _sum({"Z": 1.0}, 1)
    for theta in (0.1, 1.3, math.pi / 2, -2.0):
        assert conjugate_by_rotation(obs, P("Z"), theta) == obs


def test_conjugate_z_by_x():
    theta = 0.37
    out = conjugate_by_rotation(_sum({"Z": 1.0}, 1), P("X"), theta).as_labels()
    assert out.keys() == {"Z", "Y"}
    assert out["Z"] == pytest.approx(math.cos(theta), abs=1e-15)
    assert out["Y"] == pytest.approx(math.sin(theta), abs=1e-15)


def test_conjugate_at_half_pi_drops_cosine_branch():
    out = conjugate_by_rotation(_sum({"Z": 1.0}, 1), P("X"), math.pi / 2)
    assert out.as_labels() == {"Y": 1.0}


def test_conjugate_requires_hermitian_generator():
    with pytest.raises(PauliDomainError):
        conjugate_by_rotation(_sum({"Z": 1.0}, 1), P("iX"), 0.3)


def _random_sum(rng, n, k):
    s = PauliSum(n)
    for _ in range(k):
        p = P("".join(rng.choice(list("IXYZ"), n)))
        s.add(p.key, float(rng.normal()))
    return s


def _dense_conj(s, p, theta):
    from scipy.linalg import expm
    u = expm(0.5j * theta * string_matrix(p))
    return u @ pauli_sum_matrix(s) @ u.conj().T


def test_conjugate_matches_dense_oracle():
    rng = np.random.default_rng(11)
    for _ in range(300):
        n = int(rng.integers(1, 4))
        s = _random_sum(rng, n, int(rng.integers(1, 5)))
        p = P("".join(rng.choice(list("IXYZ"), n)), n)
        p = PauliString(n, p.x_bits, p.z_bits, 2 * int(rng.integers(2)))
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        out = conjugate_by_rotation(s, p, theta)
        assert np.max(np.abs(pauli_sum_matrix(out) - _dense_conj(s, p, theta))) < 1e-12


@settings(max_examples=200)
@given(st.integers(0, 2 ** 32 - 1), st.floats(-7, 7, allow_nan=False))
def test_conjugation_invariants(seed, theta):
    rng = np.random.default_rng(seed)
    n = 4
    s = _random_sum(rng, n, 6)
    p = P("".join(rng.choice(list("XYZ"), n)))
    out = conjugate_by_rotation(s, p, theta)
    assert out.norm_squared() == pytest.approx(s.norm_squared(), abs=1e-12)
    back = conjugate_by_rotation(out, p, -theta)
    for k in set(back.terms) | set(s.terms):
        assert abs(back.terms.get(k, 0.0) - s.terms.get(k, 0.0)) < 1e-12
    assert conjugate_by_rotation(s, p, 0.0) == s


def test_pauli_sum_drops_zero_and_folds_sign():
    s = PauliSum.from_strings([(P("-XZ"), 0.5), (P("XZ"), 0.5)], 2)
    assert len(s) == 0
    s = PauliSum.from_strings([(P("-XZ"), 0.25)], 2)
    assert s.as_labels() == {"XZ": -0.25}
