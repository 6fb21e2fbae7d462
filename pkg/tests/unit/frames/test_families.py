"""Unit tests for frame families."""

import numpy as np
import pytest
from scipy import integrate

from weakloc.core.errors import FrameError
from weakloc.frames import (
    BergmanKernelFamily,
    GaborGaussianFamily,
    HaarWaveletFamily,
    OrthonormalTestFamily,
    ScaledFamily,
    bergman_degree_for,
    bergman_tail,
    haar_admissibility_constant,
    haar_wavelet_frame,
    tight_dual,
)
from weakloc.geometry import Point, SpaceTag, sample_grid


def _gabor_atom(x, xi):
    def atom(t):
        return np.pi ** -0.25 * np.exp(-0.5 * (t - x) ** 2) * np.exp(2j * np.pi * xi * t)
    return atom


def _quad_inner(p, q):
    f, g = _gabor_atom(*p), _gabor_atom(*q)
    mid = 0.5 * (p[0] + q[0])
    lo, hi = mid - 14.0, mid + 14.0
    opts = dict(limit=400, epsabs=1e-13, epsrel=1e-12)
    re, _ = integrate.quad(lambda t: (f(t) * np.conj(g(t))).real, lo, hi, **opts)
    im, _ = integrate.quad(lambda t: (f(t) * np.conj(g(t))).imag, lo, hi, **opts)
    return re + 1j * im


@pytest.fixture
def gabor():
    """Gabor family on a time grid of half span 10."""
    return GaborGaussianFamily(0.05, 10.0)


@pytest.mark.unit
def test_gabor_examples(gabor):
    """Test unit norm and the two closed-form magnitudes."""
    e = Point(SpaceTag.EUCLIDEAN_2D, (0.0, 0.0))
    assert gabor.pair_inner(e, e) == pytest.approx(1.0)
    assert abs(gabor.pair_inner(e, Point(SpaceTag.EUCLIDEAN_2D, (2.0, 0.0)))) == pytest.approx(np.exp(-1.0), rel=1e-12)
    assert abs(gabor.pair_inner(e, Point(SpaceTag.EUCLIDEAN_2D, (0.0, 1.0)))) == pytest.approx(np.exp(-np.pi ** 2), rel=1e-12)


@pytest.mark.unit
def test_gabor_against_quadrature(gabor):
    """Test closed-form Gabor inner products against 1-D quadrature."""
    rng = np.random.default_rng(5)
    X = np.column_stack([rng.uniform(-3, 3, 40), rng.uniform(-1, 1, 40)])
    Y = np.column_stack([rng.uniform(-3, 3, 40), rng.uniform(-1, 1, 40)])
    closed = np.array([gabor.pair_inner_matrix(x[None], y[None])[0, 0] for x, y in zip(X, Y)])
    oracle = np.array([_quad_inner(tuple(x), tuple(y)) for x, y in zip(X, Y)])
    np.testing.assert_allclose(np.abs(closed), np.abs(oracle), atol=1e-8)
    np.testing.assert_allclose(closed, oracle, atol=1e-8)


@pytest.mark.unit
def test_gabor_hermitian_and_covariant(gabor):
    """Test conjugate symmetry and that magnitudes depend on differences only."""
    rng = np.random.default_rng(1)
    X = rng.uniform(-2, 2, size=(30, 2))
    Y = rng.uniform(-2, 2, size=(30, 2))
    P = gabor.pair_inner_matrix(X, Y)
    np.testing.assert_allclose(gabor.pair_inner_matrix(Y, X), P.conj().T, atol=1e-15)
    shift = np.array([1.7, -0.4])
    np.testing.assert_allclose(np.abs(gabor.pair_inner_matrix(X + shift, Y + shift)), np.abs(P), atol=1e-14)


@pytest.mark.unit
def test_gabor_realization_consistency(gabor):
    """Test time-grid realization reproduces the closed form."""
    rng = np.random.default_rng(2)
    X = np.column_stack([rng.uniform(-3, 3, 25), rng.uniform(-3, 3, 25)])
    F = gabor.realize(X)
    assert F.shape == (gabor.realization_dim, 25)
    realized = F.T @ F.conj()
    np.testing.assert_allclose(realized, gabor.pair_inner_matrix(X, X), atol=1e-9)


@pytest.mark.unit
def test_gabor_group_action(gabor):
    """Test pi(y) f_x = phase * f_{x + y} on the time grid."""
    x = np.array([[0.5, 0.3]])
    y = (1.0, -0.2)
    shift = 20  # u / dt
    v = gabor.realize(x)[:, 0]
    t = gabor.times
    moved = np.zeros_like(v)
    moved[shift:] = v[:-shift]
    moved *= np.exp(2j * np.pi * y[1] * t)

    coords, phases = gabor.act(y, x)
    np.testing.assert_allclose(coords, [[1.5, 0.1]])
    expected = phases[0] * gabor.realize(coords)[:, 0]
    np.testing.assert_allclose(moved, expected, atol=1e-12)


@pytest.mark.unit
def test_gabor_invalid_parameters():
    """Test that non-positive grid parameters are rejected."""
    with pytest.raises(FrameError):
        GaborGaussianFamily(0.0, 5.0)


@pytest.mark.unit
def test_haar_examples():
    """Test unit norm, disjoint supports and a brute-force value."""
    family = HaarWaveletFamily(np.linspace(-4, 4, 9))
    x = np.array([[0.7, 0.3]])
    assert family.pair_inner_matrix(x, x)[0, 0] == pytest.approx(1.0, abs=1e-14)
    far = np.array([[0.5, 3.0]])
    assert family.pair_inner_matrix(x, far)[0, 0] == 0.0
    assert family.pair_inner_matrix(np.array([[1.0, 0.0]]), np.array([[2.0, 0.0]]))[0, 0] == pytest.approx(0.0, abs=1e-14)


def _haar_brute(p, q, step=2.0 ** -14):
    t = np.arange(-4.0, 4.0, step) + 0.5 * step

    def atom(a, b):
        u = (t - b) / a
        return a ** -0.5 * (((u >= 0) & (u < 0.5)).astype(float) - ((u >= 0.5) & (u < 1.0)).astype(float))

    return float(np.sum(atom(*p) * atom(*q)) * step)


@pytest.mark.unit
@pytest.mark.parametrize("p, q", [
    ((1.0, 0.0), (0.5, 0.25)),
    ((2.0, -1.0), (0.25, 0.5)),
    ((1.0, 0.0), (1.0, 0.5)),
    ((0.5, 0.125), (4.0, -2.0)),
])
def test_haar_against_fine_grid(p, q):
    """Test exact piecewise integration against a dyadic fine-grid sum."""
    family = HaarWaveletFamily(np.linspace(-4, 4, 9))
    value = family.pair_inner_matrix(np.array([p]), np.array([q]))[0, 0]
    assert value.real == pytest.approx(_haar_brute(p, q), abs=1e-8)
    assert value.imag == 0.0


@pytest.mark.unit
def test_haar_known_value():
    """Test a hand-computed overlap."""
    family = HaarWaveletFamily(np.linspace(-1, 2, 4))
    value = family.pair_inner_matrix(np.array([[1.0, 0.0]]), np.array([[0.5, 0.25]]))[0, 0]
    assert value.real == pytest.approx(np.sqrt(2) / 2, abs=1e-14)


@pytest.mark.unit
def test_haar_realization_exact_on_nodes():
    """Test node atoms are represented exactly by cell indicators."""
    rng = np.random.default_rng(4)
    nodes = np.column_stack([np.exp(rng.uniform(-1.5, 1.5, 30)), rng.uniform(-2, 2, 30)])
    family = HaarWaveletFamily.for_nodes(nodes)
    F = family.realize(nodes)
    np.testing.assert_allclose(F.T @ F.conj(), family.pair_inner_matrix(nodes, nodes), atol=1e-12)


@pytest.mark.unit
def test_haar_group_action_invariance():
    """Test <f_{yx}, f_{yz}> = <f_x, f_z> for the affine action."""
    family = HaarWaveletFamily(np.linspace(-4, 4, 9))
    X = np.array([[1.0, 0.0], [0.5, 0.3], [2.0, -1.0]])
    coords, phases = family.act((1.5, 0.7), X)
    np.testing.assert_array_equal(phases, 1.0)
    np.testing.assert_allclose(
        family.pair_inner_matrix(coords, coords), family.pair_inner_matrix(X, X), atol=1e-14
    )


@pytest.mark.unit
def test_haar_far_pairs():
    """Test far pairs are the unit atom against small atoms at its middle jump."""
    family = HaarWaveletFamily(np.linspace(-1, 2, 4), far_scales=np.array([1.0, 5.0]))
    unit, small = family.far_pairs()
    np.testing.assert_array_equal(unit, [[1.0, 0.0], [1.0, 0.0]])
    np.testing.assert_allclose(small[:, 0], np.exp([-1.0, -5.0]))
    np.testing.assert_allclose(small[:, 1] + 0.5 * small[:, 0], 0.5)


@pytest.mark.unit
def test_haar_admissibility_constant_is_log_two():
    """Test the admissibility integral of the unit-norm Haar function."""
    assert haar_admissibility_constant() == pytest.approx(np.log(2.0), abs=1e-5)


@pytest.mark.unit
def test_haar_window_keeps_unit_norm():
    """Test Haar atoms stay unit-norm; the tight dual carries the 1 / ln 2 factor."""
    frame = haar_wavelet_frame(sample_grid(SpaceTag.AFFINE_GROUP, 0.5, 1.5))
    nodes = frame.domain.nodes[:3]
    np.testing.assert_allclose(np.diag(frame.family.pair_inner_matrix(nodes, nodes)).real, 1.0, atol=1e-12)

    dual = tight_dual(frame, haar_admissibility_constant())
    np.testing.assert_allclose(dual.vectors * np.log(2.0), frame.vectors, rtol=1e-4)


@pytest.mark.unit
def test_haar_needs_breakpoints():
    """Test that a realization needs at least one cell."""
    with pytest.raises(FrameError):
        HaarWaveletFamily(np.array([1.0]))


@pytest.mark.unit
def test_bergman_examples():
    """Test unit norm, the 3/4 value and realization at degree cap 60."""
    family = BergmanKernelFamily(60)
    zero = np.zeros((1, 2))
    half = np.array([[0.5, 0.0]])
    assert family.pair_inner_matrix(zero, zero)[0, 0] == pytest.approx(1.0)
    assert abs(family.pair_inner_matrix(zero, half)[0, 0]) == pytest.approx(0.75, abs=1e-12)

    z = np.array([[0.3, 0.0]])
    F = family.realize(z)
    assert abs(np.vdot(F[:, 0], F[:, 0]) - family.pair_inner_matrix(z, z)[0, 0]) <= 1e-8


@pytest.mark.unit
def test_bergman_zero_row():
    """Test |<k_0, k_w>| = 1 - |w|^2."""
    family = BergmanKernelFamily(10)
    rng = np.random.default_rng(8)
    rho = rng.uniform(0, 0.95, 20)
    theta = rng.uniform(0, 2 * np.pi, 20)
    W = np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])
    values = np.abs(family.pair_inner_matrix(np.zeros((1, 2)), W)[0])
    np.testing.assert_allclose(values, 1 - rho ** 2, atol=1e-12)


@pytest.mark.unit
def test_bergman_realization_matches_closed_form():
    """Test realization consistency within the tail bound."""
    rho_max = 0.9
    cap = bergman_degree_for(rho_max, 1e-10)
    family = BergmanKernelFamily(cap)
    rng = np.random.default_rng(9)
    rho = rng.uniform(0, rho_max, 30)
    theta = rng.uniform(0, 2 * np.pi, 30)
    Z = np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])
    F = family.realize(Z)
    np.testing.assert_allclose(F.T @ F.conj(), family.pair_inner_matrix(Z, Z), atol=1e-10)


@pytest.mark.unit
def test_bergman_degree_for_is_minimal():
    """Test the automatic degree cap is the smallest meeting the tolerance."""
    for rho_max, tol in [(0.3, 1e-8), (0.9, 1e-6), (np.tanh(2.375), 1e-6)]:
        cap = bergman_degree_for(rho_max, tol)
        assert bergman_tail(rho_max, cap) <= tol
        assert cap == 1 or bergman_tail(rho_max, cap - 1) > tol


@pytest.mark.unit
def test_bergman_invalid_cap():
    """Test that a degree cap below one is rejected."""
    with pytest.raises(FrameError):
        BergmanKernelFamily(0)


@pytest.mark.unit
def test_orthonormal_family():
    """Test the standard basis family and its domain restriction."""
    family = OrthonormalTestFamily(np.array([-1.0, 0.0, 1.0]))
    X = np.array([[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    np.testing.assert_array_equal(family.pair_inner_matrix(X, X), np.eye(3))
    np.testing.assert_array_equal(family.realize(X), np.eye(3))
    with pytest.raises(FrameError):
        family.pair_inner_matrix(np.array([[0.5, 0.0]]), X)


@pytest.mark.unit
def test_scaled_family():
    """Test scaling multiplies inner products by the squared factor."""
    base = BergmanKernelFamily(20)
    scaled = ScaledFamily(base, 2.0)
    X = np.array([[0.1, 0.2], [-0.3, 0.0]])
    np.testing.assert_allclose(scaled.pair_inner_matrix(X, X), 4 * base.pair_inner_matrix(X, X))
    np.testing.assert_allclose(scaled.realize(X), 2 * base.realize(X))
    assert scaled.describe()["scale"] == 2.0
    with pytest.raises(FrameError):
        ScaledFamily(base, 0.0)


@pytest.mark.unit
def test_pair_inner_rejects_other_space():
    """Test that a point from another space is rejected."""
    with pytest.raises(FrameError):
        BergmanKernelFamily(5).pair_inner(
            Point(SpaceTag.EUCLIDEAN_2D, (0.0, 0.0)), Point(SpaceTag.BERGMAN_DISC, (0.0, 0.0))
        )
