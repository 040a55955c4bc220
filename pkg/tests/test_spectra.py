import math

import numpy as np
import pytest

from paleyrip.errors import NonHermitianError, ParameterRangeError
from paleyrip.frame import gram_analytic
from paleyrip.rng import SplitMix64, random_subset
from paleyrip.spectra import (
    BorderedBlock,
    block3_det,
    canonical_tournament,
    dembo_lower,
    dembo_upper,
    gamma_term,
    generalized_dembo_extremes,
    gram3_charpoly_check,
    hermitian_spectrum,
    schur_bordered_det,
    skew_spectral_radius,
)


def _sign_vector(rng: SplitMix64, k: int, scale: float) -> np.ndarray:
    return 1j * scale * np.array([1.0 if rng.below(2) else -1.0 for _ in range(k)])


def _random_paley_block(rng: SplitMix64, p: int, k: int, eta: float | None = None) -> BorderedBlock:
    s = 1.0 / math.sqrt(p)
    return BorderedBlock(
        a=1.0,
        b=1j * s * (1.0 if rng.below(2) else -1.0),
        c=_sign_vector(rng, k, s),
        d=_sign_vector(rng, k, s),
        eta=1.0 + (rng.below(1000) / 1000.0 - 0.5) * s if eta is None else eta,
    )


# --- hermitian_spectrum ------------------------------------------------------


def test_spectrum_identity():
    w = hermitian_spectrum(np.eye(4))
    assert np.abs(w - 1.0).max() < 1e-14


def test_spectrum_2x2_coherence_block():
    mu = 0.3
    m = np.array([[1.0, 1j * mu], [-1j * mu, 1.0]])
    w = hermitian_spectrum(m)
    assert abs(w[0] - (1 - mu)) < 1e-12
    assert abs(w[1] - (1 + mu)) < 1e-12


def test_spectrum_3x3_real_equicoherent():
    mu = 0.2
    m = np.full((3, 3), mu) + (1 - mu) * np.eye(3)
    w = hermitian_spectrum(m)
    assert np.abs(w - np.array([1 - mu, 1 - mu, 1 + 2 * mu])).max() < 1e-12


def test_spectrum_3x3_imaginary_off_diagonals():
    # all-imaginary off-diagonals push the extremes in to 1 +- sqrt(3) mu
    mu = 0.2
    m = np.array([
        [1.0, 1j * mu, 1j * mu],
        [-1j * mu, 1.0, 1j * mu],
        [-1j * mu, -1j * mu, 1.0],
    ])
    w = hermitian_spectrum(m)
    assert abs(w[0] - (1 - math.sqrt(3) * mu)) < 1e-12
    assert abs(w[2] - (1 + math.sqrt(3) * mu)) < 1e-12


def test_spectrum_trace_identity():
    rng = SplitMix64(11)
    for _ in range(25):
        k = 2 + rng.below(12)
        support = random_subset(103, k, rng.next_u64())
        g = gram_analytic(103, support)
        w = hermitian_spectrum(g)
        assert len(w) == k
        assert np.all(np.diff(w) >= -1e-12)
        assert abs(w.sum() - k) < 1e-8 * k


def test_spectrum_signed_permutation_invariance():
    rng = SplitMix64(12)
    g = gram_analytic(43, random_subset(43, 8, 5))
    for _ in range(10):
        perm = list(range(8))
        for i in range(8):
            j = i + rng.below(8 - i)
            perm[i], perm[j] = perm[j], perm[i]
        signs = np.array([1.0 if rng.below(2) else -1.0 for _ in range(8)])
        q = np.zeros((8, 8))
        q[np.arange(8), perm] = signs
        w0 = hermitian_spectrum(g)
        w1 = hermitian_spectrum(q @ g @ q.conj().T)
        assert np.abs(w0 - w1).max() < 1e-9


def test_spectrum_symmetric_about_one_for_gramians():
    rng = SplitMix64(13)
    for _ in range(20):
        k = 2 + rng.below(10)
        g = gram_analytic(19, random_subset(19, k, rng.next_u64()))
        w = hermitian_spectrum(g)
        assert np.abs((w - 1.0) + (w - 1.0)[::-1]).max() < 1e-9


def test_spectrum_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        hermitian_spectrum(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ParameterRangeError):
        hermitian_spectrum(np.ones((2, 3)))


# --- order-3 characteristic polynomial --------------------------------------


@pytest.mark.parametrize("p", [7, 19, 103])
def test_charpoly_identity_and_spectrum(p):
    rng = SplitMix64(p * 7)
    target = math.sqrt(3.0 / p)
    for _ in range(30):
        g = gram_analytic(p, random_subset(p, 3, rng.next_u64()))
        assert gram3_charpoly_check(g, p) < 1e-12
        w = hermitian_spectrum(g)
        assert np.abs(w - np.array([1 - target, 1.0, 1 + target])).max() < 1e-10


def test_charpoly_p7_extremes():
    g = gram_analytic(7, (0, 2, 5))
    w = hermitian_spectrum(g)
    assert abs(w[0] - (1 - 0.6546536707079771)) < 1e-10
    assert abs(w[2] - (1 + 0.6546536707079771)) < 1e-10


# --- tournaments and skew spectral radius ------------------------------------


def test_canonical_tournament_shapes():
    assert np.array_equal(canonical_tournament(1), np.zeros((1, 1)))
    assert np.array_equal(canonical_tournament(2), np.array([[0, 1], [-1, 0]]))
    assert np.array_equal(
        canonical_tournament(3),
        np.array([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]]),
    )


def test_skew_radius_canonical_values():
    assert abs(skew_spectral_radius(canonical_tournament(2)) - 1.0) < 1e-12
    assert abs(skew_spectral_radius(canonical_tournament(3)) - math.sqrt(3)) < 1e-10
    for n in range(4, 13):
        target = 1.0 / math.tan(math.pi / (2 * n))
        assert abs(skew_spectral_radius(canonical_tournament(n)) - target) < 1e-8


def test_skew_radius_bounds_random_orientations():
    rng = SplitMix64(99)
    for n in range(2, 13):
        target = 1.0 / math.tan(math.pi / (2 * n))
        for _ in range(200):
            c = np.zeros((n, n))
            for i in range(n):
                for j in range(i + 1, n):
                    s = 1.0 if rng.below(2) else -1.0
                    c[i, j], c[j, i] = s, -s
            assert skew_spectral_radius(c) <= target + 1e-8


def test_skew_radius_rejects_non_skew():
    with pytest.raises(NonHermitianError):
        skew_spectral_radius(np.eye(3))


# --- one-step bordered bounds -------------------------------------------------


def test_dembo_closed_forms():
    assert dembo_upper(1.0, 1.0, 0.0) == 1.0
    assert dembo_lower(1.0, 1.0, 0.0) == 1.0
    k, p = 5, 103
    assert abs(dembo_upper(1.0, 1.0, k / p) - (1 + math.sqrt(k / p))) < 1e-15
    assert abs(dembo_lower(1.0, 1.0, k / p) - (1 - math.sqrt(k / p))) < 1e-15


def test_dembo_mirror_identity():
    rng = SplitMix64(5)
    for _ in range(50):
        c = rng.below(1000) / 500.0
        e = rng.below(1000) / 500.0
        b = rng.below(1000) / 1000.0
        s = dembo_upper(c, e, b) + dembo_lower(c, e, b)
        assert abs(s - (c + e)) < 1e-14 * max(1.0, c + e)


def test_dembo_upper_monotone():
    grid = [0.0, 0.25, 0.5, 1.0, 2.0]
    for b in grid:
        vals = [dembo_upper(1.0, e, b) for e in grid]
        assert all(v2 >= v1 - 1e-15 for v1, v2 in zip(vals, vals[1:]))
    for e in grid:
        vals = [dembo_upper(1.0, e, b) for b in grid]
        assert all(v2 >= v1 - 1e-15 for v1, v2 in zip(vals, vals[1:]))
    with pytest.raises(ParameterRangeError):
        dembo_upper(1.0, 1.0, -0.1)


# --- Schur determinant --------------------------------------------------------


def test_schur_bordered_det_degenerate():
    assert schur_bordered_det(2.5, [], [], 3.0, 0) == 2.5


def test_schur_bordered_det_hermitian_border():
    p, k = 7, 4
    b = np.full(k, 1j / math.sqrt(p))
    c = b.conj()
    val = schur_bordered_det(1.0, b, c, 1.0, k)
    assert abs(val - (1 - k / p)) < 1e-14


def test_schur_bordered_det_vs_dense():
    rng = np.random.default_rng(7)
    for _ in range(30):
        k = int(rng.integers(1, 9))
        a = complex(rng.normal(), rng.normal())
        b = rng.normal(size=k) + 1j * rng.normal(size=k)
        c = rng.normal(size=k) + 1j * rng.normal(size=k)
        eta = float(rng.normal()) or 1.0
        m = np.zeros((k + 1, k + 1), dtype=complex)
        m[0, 0] = a
        m[0, 1:] = b
        m[1:, 0] = c
        m[1:, 1:] = eta * np.eye(k)
        dense = np.linalg.det(m)
        closed = schur_bordered_det(a, b, c, eta, k)
        assert abs(closed - dense) <= 1e-10 * max(abs(dense), 1e-14)
    with pytest.raises(ParameterRangeError):
        schur_bordered_det(1.0, [1.0], [1.0], 0.0, 1)


# --- gamma and the block determinant ------------------------------------------


def test_gamma_term_length_one():
    assert gamma_term([1j], [1j]) == 0.0


def test_gamma_term_equal_signs():
    p = 7.0
    v = np.full(3, 1j / math.sqrt(p))
    # both sums equal k(k-1)/p^2 = 6/p^2, so gamma vanishes
    assert abs(gamma_term(v, v)) < 1e-15
    dd = np.abs(v) ** 2
    first = float(np.sum(np.abs(v) ** 2 * (dd.sum() - dd)))
    assert abs(first - 6.0 / p**2) < 1e-16


def test_gamma_term_bounds_for_sign_patterns():
    rng = SplitMix64(21)
    p = 19
    s = 1.0 / math.sqrt(p)
    for _ in range(200):
        k = 2 + rng.below(9)
        g = gamma_term(_sign_vector(rng, k, s), _sign_vector(rng, k, s))
        assert g >= -1e-14
        assert g <= 2.0 * k * (k - 1) / p**2 + 1e-14
    with pytest.raises(ParameterRangeError):
        gamma_term([1j, 1j], [1j])


def test_block3_det_block_diagonal_case():
    k = 5
    blk = BorderedBlock(a=2.0, b=0.0, c=np.zeros(k), d=np.zeros(k), eta=3.0)
    assert abs(block3_det(blk, 0.0) - 2.0**2 * 3.0**k) < 1e-10


def test_block3_det_vs_dense_oracle():
    rng = SplitMix64(31)
    worst = 0.0
    for _ in range(200):
        k = 2 + rng.below(9)
        blk = _random_paley_block(rng, 19, k)
        x = rng.below(2000) / 1000.0 - 0.5
        dense = np.linalg.det(blk.assemble() - x * np.eye(blk.order))
        assert abs(dense.imag) < 1e-12
        err = abs(block3_det(blk, x) - dense.real) / max(abs(dense.real), 1e-14)
        worst = max(worst, err)
    assert worst <= 1e-10
    with pytest.raises(ParameterRangeError):
        block3_det(BorderedBlock(1.0, 0.0, [1j], [1j], 1.0))


def test_block3_real_cross_term_vanishes_for_paley_data():
    rng = SplitMix64(41)
    s = 1.0 / math.sqrt(43)
    for _ in range(50):
        k = 2 + rng.below(9)
        b = 1j * s * (1.0 if rng.below(2) else -1.0)
        c = _sign_vector(rng, k, s)
        d = _sign_vector(rng, k, s)
        assert abs(np.real(b * np.dot(d, c.conj()))) < 1e-18


# --- extreme roots of the bordered quartic -------------------------------------


def test_generalized_extremes_decoupled():
    k = 4
    z = np.zeros(k)
    up = BorderedBlock(a=1.5, b=0.0, c=z, d=z, eta=1.0)
    low = BorderedBlock(a=1.5, b=0.0, c=z, d=z, eta=0.5)
    upper, lower = generalized_dembo_extremes(up, low)
    assert abs(upper - 1.5) < 1e-6
    assert abs(lower - 0.5) < 1e-12


def test_generalized_extremes_match_dense_eigensolver():
    rng = SplitMix64(51)
    for _ in range(40):
        k = 2 + rng.below(9)
        blk_up = _random_paley_block(rng, 103, k, eta=1.0 + rng.below(500) / 1000.0)
        blk_low = BorderedBlock(blk_up.a, blk_up.b, blk_up.c, blk_up.d,
                                eta=blk_up.eta - rng.below(500) / 1000.0)
        upper, lower = generalized_dembo_extremes(blk_up, blk_low)
        w_up = hermitian_spectrum(blk_up.assemble())
        w_low = hermitian_spectrum(blk_low.assemble())
        assert abs(upper - w_up[-1]) < 1e-9
        assert abs(lower - w_low[0]) < 1e-9
        assert upper >= w_up[-1] - 1e-9


def test_peeling_step_quartic_positive_at_threshold():
    # one peeling step: when the gamma inequality (C-D)((2k+1)C - D) < p^2 gamma
    # holds, the bordered-matrix characteristic quartic is strictly positive at
    # the candidate point x = 1 + (k+2)^beta / sqrt(p), i.e. that point is not
    # an eigenvalue of the comparison matrix
    rng = SplitMix64(61)
    p, beta = 103, 0.7
    s = 1.0 / math.sqrt(p)
    checked = 0
    for _ in range(200):
        k = 6 + rng.below(5)
        blk = _random_paley_block(rng, p, k, eta=1.0 + k**beta * s)
        d_const = k**beta
        c_const = (k + 2) ** beta
        gam = gamma_term(blk.c, blk.d)
        lhs = (c_const - d_const) * ((2 * k + 1) * c_const - d_const) / p**2
        if lhs < gam:
            x0 = 1.0 + c_const * s
            quartic = block3_det(blk, x0) / (blk.eta - x0) ** (k - 2)
            q_dimensionless = quartic * p**2
            expected = (
                c_const**2 * (c_const - d_const) ** 2
                - 2 * k * c_const * (c_const - d_const)
                - (c_const - d_const) ** 2
                + gam * p**2
            )
            assert q_dimensionless > 0.0
            assert abs(q_dimensionless - expected) < 1e-8 * max(1.0, abs(expected))
            checked += 1
    assert checked > 0


def test_generalized_extremes_validates_eta_order():
    z = np.zeros(3)
    up = BorderedBlock(1.0, 0.0, z, z, eta=0.5)
    low = BorderedBlock(1.0, 0.0, z, z, eta=1.0)
    with pytest.raises(ParameterRangeError):
        generalized_dembo_extremes(up, low)
