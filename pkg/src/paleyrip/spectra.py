"""Eigenvalue machinery and the closed-form determinant identities.

Spectra of complex Hermitian matrices are computed through the real
symmetric embedding [[Re M, -Im M], [Im M, Re M]], whose spectrum is that
of M with every eigenvalue doubled; the embedded problem goes to LAPACK
(numpy.linalg.eigvalsh).  The bordered-matrix bounds are evaluated from
their closed forms and cross-checked elsewhere against dense oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import NonHermitianError, ParameterRangeError

HERMITIAN_TOL = 1e-10
SKEW_TOL = 1e-12


def hermitian_spectrum(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending.

    Strategy: embed M = A + iB into the real symmetric [[A, -B], [B, A]],
    take its 2k eigenvalues (each eigenvalue of M appears twice, and the
    sorted list interleaves the pairs), and keep every other one.  Inputs
    farther than `tol` from Hermitian are rejected; LAPACK convergence
    failures propagate as numpy.linalg.LinAlgError.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterRangeError(f"need a square matrix, got shape {m.shape}")
    dev = float(np.abs(m - m.conj().T).max())
    if dev > tol:
        raise NonHermitianError(f"Hermitian deviation {dev:.3e} exceeds {tol:.1e}")
    a, b = m.real, m.imag
    embedded = np.block([[a, -b], [b, a]])
    w = np.linalg.eigvalsh(embedded)
    return w[::2].copy()


def gram3_charpoly_check(g: np.ndarray, p, x_grid=(0.0, 0.5, 1.0, 1.5, 2.0)) -> float:
    """Max residual of det(G - xI) - [(1-x)^3 - 3(1-x)/p] over the grid.

    Every order-3 Gramian of the Paley frame has this characteristic
    polynomial regardless of the off-diagonal sign pattern, which pins its
    spectrum to {1 - sqrt(3/p), 1, 1 + sqrt(3/p)}.
    """
    g = np.asarray(g, dtype=complex)
    if g.shape != (3, 3):
        raise ParameterRangeError(f"need a 3x3 matrix, got shape {g.shape}")
    p = int(getattr(p, "p", p))
    worst = 0.0
    eye = np.eye(3)
    for x in x_grid:
        det = np.linalg.det(g - x * eye)
        ref = (1.0 - x) ** 3 - 3.0 * (1.0 - x) / p
        worst = max(worst, abs(det - ref))
    return worst


def canonical_tournament(n: int) -> np.ndarray:
    """Skew adjacency of the transitive tournament: +1 above, -1 below."""
    n = int(n)
    if n < 1:
        raise ParameterRangeError(f"order must be >= 1, got {n}")
    ones = np.ones((n, n))
    return np.triu(ones, 1) - np.tril(ones, -1)


def skew_spectral_radius(c: np.ndarray, tol: float = SKEW_TOL) -> float:
    """Spectral radius of a real skew-symmetric matrix.

    Equals the largest eigenvalue of the Hermitian matrix i*C.  For any
    orientation of a graph on n vertices this is at most cot(pi/2n), with
    equality for the canonical tournament.
    """
    c = np.asarray(c, dtype=float)
    dev = float(np.abs(c + c.T).max())
    if dev > tol:
        raise NonHermitianError(f"skew-symmetry deviation {dev:.3e} exceeds {tol:.1e}")
    return float(hermitian_spectrum(1j * c)[-1])


def dembo_upper(c: float, eta_k: float, btb: float) -> float:
    """Upper bound (c + eta)/2 + sqrt((c - eta)^2/4 + b*b) on the top eigenvalue.

    `eta_k` is any upper bound for the trailing block's largest eigenvalue
    and `btb` the squared norm of the border vector.
    """
    if btb < 0:
        raise ParameterRangeError(f"btb must be >= 0, got {btb}")
    return (c + eta_k) / 2.0 + math.sqrt((c - eta_k) ** 2 / 4.0 + btb)


def dembo_lower(c: float, eta_1: float, btb: float) -> float:
    """Mirror of dembo_upper bounding the bottom eigenvalue from below."""
    if btb < 0:
        raise ParameterRangeError(f"btb must be >= 0, got {btb}")
    return (c + eta_1) / 2.0 - math.sqrt((c - eta_1) ** 2 / 4.0 + btb)


def schur_bordered_det(a, b, c, eta, k: int):
    """det of [[a, b], [c, eta*I_k]] via the Schur complement: eta^k (a - b.c/eta).

    `b` is the length-k top row block, `c` the length-k left column block;
    the dot product does not conjugate either factor.
    """
    if eta == 0:
        raise ParameterRangeError("eta must be nonzero")
    b = np.asarray(b, dtype=complex).ravel()
    c = np.asarray(c, dtype=complex).ravel()
    if len(b) != k or len(c) != k:
        raise ParameterRangeError(f"border length mismatch: {len(b)}, {len(c)} vs k={k}")
    if k == 0:
        return complex(a)
    return eta**k * (a - np.dot(b, c) / eta)


def gamma_term(c, d) -> float:
    """Correction term of the bordered determinant closed form.

    gamma = sum_i |c_i|^2 (d_i . d_i*) - sum_i c_i d_i* (d_i . c_i*), where
    the subscript-i vectors drop entry i.  The value is real; an imaginary
    residue above 1e-12 trips an assertion.
    """
    c = np.asarray(c, dtype=complex).ravel()
    d = np.asarray(d, dtype=complex).ravel()
    if len(c) != len(d):
        raise ParameterRangeError(f"length mismatch: {len(c)} vs {len(d)}")
    if len(c) < 1:
        raise ParameterRangeError("vectors must have length >= 1")
    dd = np.abs(d) ** 2
    first = float(np.sum(np.abs(c) ** 2 * (dd.sum() - dd)))
    s_dc = np.dot(d, c.conj())
    second = np.sum(c * d.conj() * (s_dc - d * c.conj()))
    gamma = first - second
    assert abs(gamma.imag) < 1e-12, f"gamma has imaginary residue {gamma.imag:.3e}"
    return float(gamma.real)


@dataclass(frozen=True)
class BorderedBlock:
    """Data of the two-row bordered matrix [[a, b, c], [b*, a, d], [c*, d*, eta*I]].

    `eta` is the spectral proxy standing in for the trailing block.
    """

    a: float
    b: complex
    c: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    eta: float

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex).ravel()
        d = np.asarray(self.d, dtype=complex).ravel()
        if len(c) != len(d) or len(c) < 1:
            raise ParameterRangeError(
                f"border vectors need equal length >= 1, got {len(c)} and {len(d)}"
            )
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def order(self) -> int:
        return len(self.c) + 2

    def assemble(self) -> np.ndarray:
        """Dense matrix for oracle comparisons."""
        k = len(self.c)
        r = np.zeros((k + 2, k + 2), dtype=complex)
        r[0, 0] = r[1, 1] = self.a
        r[0, 1] = self.b
        r[1, 0] = np.conj(self.b)
        r[0, 2:] = self.c
        r[2:, 0] = np.conj(self.c)
        r[1, 2:] = self.d
        r[2:, 1] = np.conj(self.d)
        r[2:, 2:] = self.eta * np.eye(k)
        return r


def _bordered_quartic(blk: BorderedBlock, x) -> np.ndarray:
    """Degree-4 factor of det(R - xI) for the bordered matrix R.

    q(x) = (a-x)^2 (eta-x)^2 - (a-x)(eta-x)(dd* + cc*) - bb*(eta-x)^2
           + 2 (eta-x) Re(b d.c*) + gamma
    """
    u = blk.a - np.asarray(x, dtype=float)
    v = blk.eta - np.asarray(x, dtype=float)
    cc = float(np.sum(np.abs(blk.c) ** 2))
    dd = float(np.sum(np.abs(blk.d) ** 2))
    bb = abs(blk.b) ** 2
    rbdc = float(np.real(blk.b * np.dot(blk.d, blk.c.conj())))
    gam = gamma_term(blk.c, blk.d)
    return u * u * v * v - u * v * (dd + cc) - bb * v * v + 2.0 * v * rbdc + gam


def block3_det(blk: BorderedBlock, x: float = 0.0) -> float:
    """Closed-form det(R - xI) = (eta-x)^(k-2) * quartic(x) for k >= 2.

    Matches a dense LU determinant of the assembled matrix to 1e-10
    relative; the quartic factor is shared with the extreme-root solver.
    """
    k = len(blk.c)
    if k < 2:
        raise ParameterRangeError(f"block determinant needs k >= 2, got {k}")
    return float((blk.eta - x) ** (k - 2) * _bordered_quartic(blk, x))


# Root scan parameters: the quartic's real roots are bracketed on
# [eta - 3, eta + 3] at this resolution, then refined.
_SCAN_HALF_WIDTH = 3.0
_SCAN_STEP = 1e-4
_REFINE_XTOL = 1e-12
_TOUCH_REL_TOL = 1e-9


def _quartic_real_roots(blk: BorderedBlock) -> list[float]:
    """Real roots of the bordered quartic inside the scan bracket.

    Sign changes on the grid are refined with Brent's method; grid-local
    extrema that dip to (numerical) zero are polished with a bounded scalar
    minimizer to catch even-multiplicity roots, which never cross zero.
    """
    lo = blk.eta - _SCAN_HALF_WIDTH
    hi = blk.eta + _SCAN_HALF_WIDTH
    xs = np.linspace(lo, hi, int(round((hi - lo) / _SCAN_STEP)) + 1)
    fs = _bordered_quartic(blk, xs)
    scale = max(1.0, float(np.abs(fs).max()))
    roots: list[float] = []

    exact = np.nonzero(fs == 0.0)[0]
    roots.extend(float(xs[i]) for i in exact)

    sign_change = np.nonzero((fs[:-1] * fs[1:]) < 0.0)[0]
    f = lambda t: float(_bordered_quartic(blk, t))
    for i in sign_change:
        roots.append(float(brentq(f, xs[i], xs[i + 1], xtol=_REFINE_XTOL)))

    # Even-multiplicity roots: local |q| minima whose polished value is ~0.
    mags = np.abs(fs)
    interior = np.arange(1, len(xs) - 1)
    local_min = interior[(mags[interior] <= mags[interior - 1]) & (mags[interior] <= mags[interior + 1])]
    for i in local_min:
        if fs[i] == 0.0 or fs[i - 1] * fs[i] < 0.0 or fs[i] * fs[i + 1] < 0.0:
            continue  # already handled above
        sgn = 1.0 if fs[i] > 0.0 else -1.0
        res = minimize_scalar(
            lambda t: sgn * float(_bordered_quartic(blk, t)),
            bounds=(float(xs[i - 1]), float(xs[i + 1])),
            method="bounded",
            options={"xatol": 1e-13},
        )
        if abs(res.fun) <= _TOUCH_REL_TOL * scale:
            roots.append(float(res.x))
    return sorted(roots)


def generalized_dembo_extremes(blk_up: BorderedBlock, blk_low: BorderedBlock) -> tuple[float, float]:
    """Extreme-eigenvalue bounds from the two bordered comparison matrices.

    `upper` is the largest real root of the quartic factor for the matrix
    built with the upper proxy eta, `lower` the smallest root for the lower
    proxy; eta itself is always a candidate (it is an eigenvalue of
    multiplicity k-2, and sits between the extremes of the bordered matrix
    for any k).  Raises when no real root lies in the scan bracket.
    """
    if blk_up.eta < blk_low.eta:
        raise ParameterRangeError(
            f"upper proxy eta {blk_up.eta} below lower proxy eta {blk_low.eta}"
        )
    roots_up = _quartic_real_roots(blk_up)
    roots_low = _quartic_real_roots(blk_low)
    if not roots_up or not roots_low:
        raise ParameterRangeError("no real root of the bordered quartic in the scan bracket")
    return max(roots_up[-1], blk_up.eta), min(roots_low[0], blk_low.eta)
