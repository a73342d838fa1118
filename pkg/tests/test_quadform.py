import math

import numpy as np
import pytest

from mollint.dirichlet import build_L_theta, delta_poly, make_poly
from mollint.quadform import (
    CoefficientContractError,
    big_G,
    diag_residual,
    gram_form,
    log_form,
    minimizer_coeffs,
    propB_value,
    s_decomposition,
    y_vector,
    z_vector,
)
from mollint.moments import bch_predicted


def admissible(rng, N):
    c = (np.arange(1, N + 1) ** 0.1) * np.exp(2j * np.pi * rng.random(N))
    c[0] = 1.0
    return make_poly(c, bound_C=1.0, bound_eps=0.1)


def brute_gram(a):
    """O(N^2) reference in pure Python (independent of the library path)."""
    N = a.length_N
    total = 0.0 + 0.0j
    for d in range(1, N + 1):
        for e in range(1, N + 1):
            g = math.gcd(d, e)
            total += a.coeffs[d] * np.conj(a.coeffs[e]) / (d * e // g)
    return total


def test_big_g_small_values(sieve):
    assert big_G(1, sieve) == 1.0
    assert big_G(3, sieve) == 2.5
    G = big_G(10_000, sieve)
    assert 0.9 <= G / math.log(10_000) <= 1.4


def test_y_vector_hand_cases(sieve):
    x = 0.37
    y = y_vector(make_poly([1.0, x]), sieve)
    assert y[1] == pytest.approx(1.0 + x / 2.0, abs=1e-15)
    assert y[2] == pytest.approx(x, abs=1e-15)
    y = y_vector(delta_poly(), sieve)
    assert y[1] == 1.0


def test_mobius_constraint(sieve, rng):
    from mollint.arith import mobius_table
    N = 400
    a = admissible(rng, N)
    y = y_vector(a, sieve)
    mu = mobius_table(N, sieve).astype(float)
    ell = np.arange(0, N + 1, dtype=float)
    s = np.sum(y[1:] * mu[1:] / ell[1:])
    assert s == pytest.approx(1.0, abs=1e-12)


def test_z_vector_hand_case(sieve):
    z = z_vector(2, sieve)
    assert z[1] == 0.5 and z[2] == -1.0
    z = z_vector(10, sieve)
    assert z[4] == 0.0 and z[8] == 0.0  # mu vanishes
    # sum phi/l^2 z^2 = 1/G
    from mollint.arith import phi_table
    phi = phi_table(10, sieve).astype(float)
    ell = np.arange(0.0, 11.0)
    lhs = np.sum(phi[1:] / ell[1:] ** 2 * z[1:] ** 2)
    assert lhs == pytest.approx(1.0 / big_G(10, sieve), rel=1e-12)


def test_gram_form_hand_and_brute(sieve, rng):
    x = 0.7
    a = make_poly([1.0, x])
    expected = 1.0 + x + x * x / 2.0
    assert gram_form(a, sieve, "direct") == pytest.approx(expected, rel=1e-14)
    assert gram_form(a, sieve, "diagonal") == pytest.approx(expected, rel=1e-12)
    b = admissible(rng, 40)
    ref = brute_gram(b)
    assert abs(ref.imag) <= 1e-12
    assert gram_form(b, sieve, "direct") == pytest.approx(ref.real, rel=1e-12)


@pytest.mark.parametrize("N", [10, 50, 200])
def test_diagonalization_random(sieve, rng, N):
    for _ in range(20):
        a = admissible(rng, N)
        d = gram_form(a, sieve, "direct")
        g = gram_form(a, sieve, "diagonal")
        assert abs(d - g) <= 1e-10 * abs(d)


def test_lemma_identity_and_contract(sieve, rng):
    a = admissible(rng, 300)
    dec = diag_residual(a, sieve)  # raises if the identity fails at 1e-10
    assert dec.residual >= 0.0
    assert dec.form >= 1.0 / dec.G - 1e-10
    bad = make_poly([2.0, 1.0])
    with pytest.raises(CoefficientContractError):
        diag_residual(bad, sieve)


def test_lemma_identity_hand_case(sieve):
    dec = diag_residual(make_poly([1.0, 0.0]), sieve)
    assert dec.residual == pytest.approx(0.5, abs=1e-14)
    assert dec.form == pytest.approx(1.0, abs=1e-14)


def test_minimizer_small_and_optimal(sieve, rng):
    m = minimizer_coeffs(2, sieve)
    assert m.coeffs[1] == pytest.approx(1.0, abs=1e-14)
    assert m.coeffs[2] == pytest.approx(-1.0, abs=1e-14)
    N = 200
    m = minimizer_coeffs(N, sieve)
    base = gram_form(m, sieve, "diagonal")
    assert base == pytest.approx(1.0 / big_G(N, sieve), rel=1e-12)
    for _ in range(20):
        pert = admissible(rng, N)
        assert gram_form(pert, sieve, "diagonal") >= base - 1e-12


def test_log_form_hand_case(sieve):
    assert log_form(delta_poly(), sieve, "direct") == 0.0
    x = 0.4
    a = make_poly([1.0, x])
    assert log_form(a, sieve, "direct") == pytest.approx(x * math.log(2.0),
                                                         rel=1e-14)


def test_log_form_hermitian_real(sieve, rng):
    from mollint.quadform import _log_direct
    a = admissible(rng, 60)
    assert abs(_log_direct(a).imag) <= 1e-12


def test_log_form_brute(sieve, rng):
    a = admissible(rng, 30)
    N = 30
    ref = 0.0
    for d in range(1, N + 1):
        for e in range(1, N + 1):
            g = math.gcd(d, e)
            ref += (a.coeffs[d] * np.conj(a.coeffs[e]) / (d * e // g)).real \
                * math.log(d * e / g / g)
    assert log_form(a, sieve, "direct") == pytest.approx(ref, rel=1e-12)


def test_s_decomposition_sign_and_minimizer(sieve, rng):
    a = admissible(rng, 200)
    sd = s_decomposition(a, sieve)
    assert sd.s2_sign == 1  # the expansion recombines with a plus sign
    assert sd.main == pytest.approx(sd.s1 + sd.s2 + sd.s3, rel=1e-12)
    assert sd.main == pytest.approx(log_form(a, sieve, "telescoped"),
                                    rel=1e-12)
    m = minimizer_coeffs(500, sieve)
    sdm = s_decomposition(m, sieve)
    assert abs(sdm.s1) <= 1e-12 and abs(sdm.s2) <= 1e-12
    assert sdm.main == pytest.approx(sdm.s3, abs=1e-12)
    assert -1.3 <= sdm.s3 <= -0.4  # drifting toward -1


def test_s1_envelope(sieve, rng):
    # |S1| <= (log N + C loglog N) * residual, C reported by measurement
    N = 300
    for _ in range(5):
        a = admissible(rng, N)
        sd = s_decomposition(a, sieve)
        res = diag_residual(a, sieve).residual
        assert abs(sd.s1) <= (math.log(N) + 6.0 * math.log(math.log(N))) * res


def test_propb_hand_case_and_cross_module(sieve):
    from mollint.quadform import PROPB_C
    v = propB_value(100.0, delta_poly(), sieve)
    assert v == pytest.approx(math.log(PROPB_C * 100.0) - 1.0, rel=1e-14)
    m = minimizer_coeffs(251, sieve)
    assert propB_value(1e6, m, sieve) == pytest.approx(
        bch_predicted(1e6, m), rel=1e-10)


def test_propb_constant_spellings():
    from mollint.quadform import PROPB_C
    from mollint.arith import EULER_GAMMA
    lhs = math.log(PROPB_C * 1000.0)
    rhs = math.log(1000.0 / (2 * math.pi)) + 2 * math.log(2.0) \
        + 2 * EULER_GAMMA - 1.0
    assert lhs == pytest.approx(rhs, abs=1e-14)
