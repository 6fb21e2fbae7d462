"""
Toeplitz and Hankel operators on the Bergman space, in the monomial basis.

e_n = sqrt((n + 1) / pi) z^n, n = 0..N. Integrals over the disc use polar
Gauss-Legendre panels in r (split at the symbol's radial breakpoints) and
equally spaced angles, with angular Fourier coefficients taken by FFT.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import special

from weakloc.core.errors import OperatorError
from weakloc.frames.families import bergman_tail
from weakloc.geometry.spaces import SpaceTag, space_for
from weakloc.operators.symbols import Symbol

logger = logging.getLogger(__name__)


@dataclass
class PolarRule:
    """Quadrature nodes for integrals over the unit disc in polar form."""
    r: np.ndarray
    r_weights: np.ndarray
    theta: np.ndarray

    @property
    def points(self) -> np.ndarray:
        rr, tt = np.meshgrid(self.r, self.theta, indexing="ij")
        return np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()])

    @property
    def area_weights(self) -> np.ndarray:
        """Weights for dA = r dr dtheta on the flattened (r, theta) grid."""
        wr = self.r_weights * self.r
        return np.repeat(wr, len(self.theta)) * (2.0 * np.pi / len(self.theta))


def radial_rule(n_per_panel: int, breakpoints: Sequence[float] = ()) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1], one panel per breakpoint interval."""
    x, w = special.roots_legendre(n_per_panel)
    edges = np.unique(np.concatenate([[0.0, 1.0], [b for b in breakpoints if 0.0 < b < 1.0]]))
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def polar_rule(
    degree: int,
    breakpoints: Sequence[float] = (),
    n_radial: Optional[int] = None,
    n_angular: Optional[int] = None
) -> PolarRule:
    """Rule exact for r^k e^{i m theta} with k, |m| up to about 2 * degree."""
    r, wr = radial_rule(n_radial or 2 * degree + 8, breakpoints)
    L = n_angular or 4 * degree + 16
    return PolarRule(r, wr, 2.0 * np.pi * np.arange(L) / L)


def basis_values(N: int, rule: PolarRule) -> np.ndarray:
    """(N + 1, P) values of e_0..e_N on the flattened grid."""
    X = rule.points
    z = X[:, 0] + 1j * X[:, 1]
    n = np.arange(N + 1)[:, None]
    return np.sqrt((n + 1.0) / np.pi) * z[None, :] ** n


def _check_degree(N: int) -> None:
    if N < 1:
        raise OperatorError(f"basis cap must be >= 1, got {N}")


def radial_toeplitz_diagonal(symbol: Symbol, N: int) -> np.ndarray:
    """2 (n + 1) int_0^1 u(r) r^(2n + 1) dr for n = 0..N."""
    _check_degree(N)
    if symbol.radial_profile is None:
        raise OperatorError(f"symbol {symbol.descriptor} has no radial profile")
    r, wr = radial_rule(N + 8, symbol.breakpoints)
    n = np.arange(N + 1)[:, None]
    u = np.asarray(symbol.radial_profile(r))
    return 2.0 * (n[:, 0] + 1.0) * ((r[None, :] ** (2 * n + 1)) @ (wr * u))


def toeplitz_matrix(symbol: Symbol, N: int, rule: Optional[PolarRule] = None) -> np.ndarray:
    """
    T[m, n] = <T_u e_n, e_m> for m, n <= N.

    Radial symbols take the diagonal path unless a rule is given.
    """
    _check_degree(N)
    if symbol.radial_profile is not None and rule is None:
        d = radial_toeplitz_diagonal(symbol, N)
        return np.diag(d.astype(complex) if not symbol.is_real else d)

    rule = rule or polar_rule(N, symbol.breakpoints)
    L = len(rule.theta)
    u = symbol.eval(rule.points, space_for(SpaceTag.BERGMAN_DISC)).reshape(len(rule.r), L)
    # coef[i, k] = int_0^2pi u(r_i, theta) e^{i k theta} dtheta
    coef = 2.0 * np.pi * np.fft.ifft(u, axis=1)
    n = np.arange(N + 1)
    freq = (n[None, :] - n[:, None]) % L
    radial = rule.r_weights * rule.r
    T = np.empty((N + 1, N + 1), dtype=complex)
    for m in range(N + 1):
        powers = rule.r[:, None] ** (n[None, :] + m)
        T[m] = np.sqrt((n + 1.0) * (m + 1.0)) / np.pi * np.einsum(
            "i,in,in->n", radial, powers, coef[:, freq[m]]
        )
    return T.real if symbol.is_real and np.allclose(T.imag, 0.0, atol=1e-14) else T


def hankel_gram(symbol: Symbol, N: int, projection_degree: Optional[int] = None) -> np.ndarray:
    """
    H_u* H_u on e_0..e_N, with H_u e_n = u e_n - P (u e_n).

    P projects onto the monomials of degree <= ``projection_degree``
    (default 2N); products u e_n are formed on the polar grid.
    """
    _check_degree(N)
    M = 2 * N if projection_degree is None else int(projection_degree)
    if M < N:
        raise OperatorError(f"projection degree {M} below the basis cap {N}")
    rule = polar_rule(M, symbol.breakpoints)
    Q = rule.area_weights
    E_M = basis_values(M, rule)
    u = symbol.eval(rule.points, space_for(SpaceTag.BERGMAN_DISC))
    UE = u[None, :] * E_M[: N + 1]
    C = (E_M.conj() * Q[None, :]) @ UE.T
    H = UE - C.T @ E_M
    return (H.conj() * Q[None, :]) @ H.T


@dataclass
class HankelResidual:
    """Per-basis-vector residual of H*H - (T_{|u|^2} - T_conj(u) T_u)."""
    degrees: np.ndarray
    residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"n": self.degrees, "residual": self.residuals})


def hankel_identity_residual(symbol: Symbol, N: int) -> HankelResidual:
    """
    Column residuals of the Toeplitz-Hankel identity on e_n, n <= N // 2.

    The upper half of the basis absorbs truncation of the multiplication
    operator and is not reported.
    """
    rule = polar_rule(N, symbol.breakpoints)
    T = toeplitz_matrix(symbol, N, rule)
    T_abs2 = toeplitz_matrix(symbol.abs_squared(), N, rule)
    gap = hankel_gram(symbol, N) - (T_abs2 - T.conj().T @ T)
    half = N // 2
    degrees = np.arange(half + 1)
    residuals = np.linalg.norm(gap[:, : half + 1], axis=0)
    logger.info("Hankel identity for %s: max residual %.3e on n <= %d", symbol.descriptor, residuals.max(), half)
    return HankelResidual(degrees, residuals)


def kernel_coefficients(z: complex, N: int) -> np.ndarray:
    """Coefficients of the normalized kernel k_z on e_0..e_N."""
    n = np.arange(N + 1)
    return (1.0 - abs(z) ** 2) * np.sqrt(n + 1.0) * np.conj(z) ** n


def hankel_berezin(
    symbol: Symbol,
    N: int,
    radii: Sequence[float],
    tolerance: float = 1e-6
) -> pd.DataFrame:
    """
    ||H_u k_z||^2 for z = radius on the positive axis.

    ``realizable`` marks radii where the degree-N kernel tail is within
    ``tolerance``.
    """
    G = hankel_gram(symbol, N)
    rows = []
    for rho in radii:
        if not 0 <= rho < 1:
            raise OperatorError(f"radius must lie in [0, 1), got {rho}")
        c = kernel_coefficients(complex(rho), N)
        rows.append({
            "radius": float(rho),
            "hankel_berezin": float(np.real(c.conj() @ G @ c)),
            "realizable": bool(bergman_tail(rho, N) <= tolerance),
        })
    return pd.DataFrame(rows, columns=["radius", "hankel_berezin", "realizable"])
