"""Unit tests for sampled frames, frame bounds and duals."""

import numpy as np
import pytest
from scipy import linalg

from weakloc.core.errors import FrameError, IllConditionedFrameError
from weakloc.frames import (
    SampledFrame,
    TransformedFamily,
    analysis,
    bergman_disc_frame,
    canonical_dual,
    check_condition,
    frame_bounds,
    frame_operator,
    gabor_gaussian_frame,
    gabor_interior_subspace,
    haar_admissibility_constant,
    haar_wavelet_frame,
    orthonormal_test_frame,
    parseval_dual,
    realization_error,
    reconstruct,
    reconstruction_residual,
    synthesis,
    tight_dual,
)
from weakloc.frames.families import BergmanKernelFamily
from weakloc.geometry import SpaceTag, sample_grid


@pytest.fixture(scope="module")
def small_gabor():
    """Gabor frame on a coarse plane grid."""
    return gabor_gaussian_frame(sample_grid(SpaceTag.EUCLIDEAN_2D, 0.5, 2.0))


@pytest.fixture(scope="module")
def gabor_default():
    """Gabor frame at step 1/4 truncated at radius 6."""
    return gabor_gaussian_frame(sample_grid(SpaceTag.EUCLIDEAN_2D, 0.25, 6.0))


@pytest.fixture(scope="module")
def small_bergman():
    """Bergman frame on a coarse disc grid."""
    return bergman_disc_frame(sample_grid(SpaceTag.BERGMAN_DISC, 0.25, 1.5))


def _resolved_basis(frame, cutoff=1e-8):
    lam, V = linalg.eigh(frame_operator(frame))
    return V[:, lam > cutoff * lam[-1]]


@pytest.mark.unit
@pytest.mark.parametrize("n", [1, 4, 5])
def test_orthonormal_frame_bounds(n):
    """Test the orthonormal test frame is Parseval."""
    frame = orthonormal_test_frame(n)
    assert len(frame) == n
    bounds = frame_bounds(frame)
    assert bounds.lower == pytest.approx(1.0, abs=1e-14)
    assert bounds.upper == pytest.approx(1.0, abs=1e-14)
    assert bounds.resolved_rank == n
    c, C = bounds
    assert (c, C) == (bounds.lower, bounds.upper)


@pytest.mark.unit
def test_scaled_frame_bounds(small_bergman):
    """Test that scaling the frame by 2 scales its bounds by 4."""
    before = frame_bounds(small_bergman)
    after = frame_bounds(small_bergman.scaled(2.0))
    assert after.upper == pytest.approx(4 * before.upper, rel=1e-10)
    assert after.lower == pytest.approx(4 * before.lower, rel=1e-8)


@pytest.mark.unit
def test_gabor_parseval_on_interior_subspace(gabor_default):
    """Test discrete Gabor bounds on interior atoms lie within 5% of one."""
    Q = gabor_interior_subspace(gabor_default)
    assert Q.shape[1] == 9
    bounds = frame_bounds(gabor_default, subspace=Q)
    assert 0.95 <= bounds.lower <= bounds.upper <= 1.05


@pytest.mark.slow
@pytest.mark.unit
def test_gabor_parseval_improves_with_resolution(gabor_default):
    """Test halving the lattice step tightens the interior bounds."""
    fine = gabor_gaussian_frame(sample_grid(SpaceTag.EUCLIDEAN_2D, 0.125, 6.0))

    def spread(frame):
        b = frame_bounds(frame, subspace=gabor_interior_subspace(frame))
        return max(abs(b.lower - 1.0), abs(b.upper - 1.0))

    assert spread(fine) < spread(gabor_default)


@pytest.mark.unit
def test_realization_consistency(small_gabor, small_bergman):
    """Test sampled realizations match the closed forms."""
    assert realization_error(small_gabor) <= 1e-6
    assert realization_error(small_bergman) <= 1e-6
    haar = haar_wavelet_frame(sample_grid(SpaceTag.AFFINE_GROUP, 0.5, 1.5))
    assert realization_error(haar) <= 1e-4


@pytest.mark.unit
def test_gram_hermitian_psd_and_cached(small_gabor):
    """Test the Gram matrix is Hermitian PSD, cached and read-only."""
    G = small_gabor.gram
    assert G is small_gabor.gram
    assert not G.flags.writeable
    np.testing.assert_allclose(G, G.conj().T, atol=1e-15)
    assert linalg.eigvalsh(G).min() >= -1e-10
    np.testing.assert_allclose(np.diag(G).real, 1.0)


@pytest.mark.unit
def test_analysis_examples():
    """Test analysis of a frame vector and of zero."""
    frame = orthonormal_test_frame(5)
    f = frame.vectors[:, 2]
    coeffs = analysis(frame, f)
    assert coeffs[2] == 1.0
    np.testing.assert_array_equal(analysis(frame, np.zeros(5)), 0.0)


@pytest.mark.unit
def test_analysis_energy_within_bounds(small_gabor):
    """Test sum w |<f, f_x>|^2 lies between c |f|^2 and C |f|^2."""
    rng = np.random.default_rng(0)
    bounds = frame_bounds(small_gabor)
    V = _resolved_basis(small_gabor)
    for _ in range(10):
        f = V @ (rng.normal(size=V.shape[1]) + 1j * rng.normal(size=V.shape[1]))
        energy = np.sum(small_gabor.weights * np.abs(analysis(small_gabor, f)) ** 2)
        norm2 = np.vdot(f, f).real
        assert bounds.lower * norm2 * (1 - 1e-9) <= energy <= bounds.upper * norm2 * (1 + 1e-9)


@pytest.mark.unit
def test_synthesis_adjoint_and_frame_operator(small_gabor):
    """Test adjointness and both assembly paths of S."""
    rng = np.random.default_rng(1)
    n, dim = len(small_gabor), small_gabor.dim
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    f = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    w = small_gabor.weights

    lhs = np.vdot(f, synthesis(small_gabor, a))
    rhs = np.sum(w * a * np.conj(analysis(small_gabor, f)))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))

    S = frame_operator(small_gabor)
    np.testing.assert_allclose(synthesis(small_gabor, analysis(small_gabor, f)), S @ f, atol=1e-10)
    # analysis o synthesis through the closed-form Gram
    np.testing.assert_allclose(
        analysis(small_gabor, synthesis(small_gabor, a)), small_gabor.gram @ (w * a), atol=1e-8
    )
    np.testing.assert_array_equal(synthesis(small_gabor, np.zeros(n)), 0.0)


@pytest.mark.unit
def test_dimension_mismatch(small_gabor):
    """Test analysis and synthesis reject wrong lengths."""
    with pytest.raises(FrameError):
        analysis(small_gabor, np.zeros(small_gabor.dim + 1))
    with pytest.raises(FrameError):
        synthesis(small_gabor, np.zeros(len(small_gabor) - 1))


@pytest.mark.unit
def test_wrong_space_rejected():
    """Test constructors reject domains over the wrong space."""
    affine = sample_grid(SpaceTag.AFFINE_GROUP, 0.5, 1.0)
    with pytest.raises(FrameError, match="Euclidean2D"):
        gabor_gaussian_frame(affine)
    with pytest.raises(FrameError, match="BergmanDisc"):
        bergman_disc_frame(affine)
    with pytest.raises(FrameError, match="AffineGroup"):
        haar_wavelet_frame(sample_grid(SpaceTag.EUCLIDEAN_2D, 0.5, 1.0))
    with pytest.raises(FrameError):
        SampledFrame(affine, BergmanKernelFamily(4))


@pytest.mark.unit
def test_bergman_degree_cap_too_small():
    """Test an explicit cap below the tail tolerance is an error."""
    domain = sample_grid(SpaceTag.BERGMAN_DISC, 0.25, 2.5)
    with pytest.raises(FrameError, match="too small"):
        bergman_disc_frame(domain, degree_cap=60)


@pytest.mark.unit
def test_interior_subspace_needs_gabor(small_bergman):
    """Test the interior subspace is only defined for Gabor frames."""
    with pytest.raises(FrameError):
        gabor_interior_subspace(small_bergman)


@pytest.mark.unit
def test_canonical_dual_orthonormal():
    """Test the canonical dual of an orthonormal basis is the basis."""
    frame = orthonormal_test_frame(6)
    dual = canonical_dual(frame)
    np.testing.assert_allclose(dual.vectors, frame.vectors, atol=1e-12)
    assert dual.kind == "canonical"
    assert dual.upper_bound == pytest.approx(1.0)


@pytest.mark.unit
def test_canonical_dual_reconstruction(gabor_default):
    """Test reconstruction of 20 random interior test vectors."""
    rng = np.random.default_rng(7)
    dual = canonical_dual(gabor_default)
    interior = np.flatnonzero(gabor_default.domain.basepoint_distances <= 2.0)
    F = gabor_default.vectors[:, interior]
    coeffs = rng.normal(size=(len(interior), 20)) + 1j * rng.normal(size=(len(interior), 20))
    tests = F @ coeffs
    assert reconstruction_residual(dual, tests) <= 1e-6


@pytest.mark.unit
def test_canonical_dual_ill_conditioned(small_gabor):
    """Test a strict condition floor raises with the computed bounds."""
    with pytest.raises(IllConditionedFrameError) as info:
        canonical_dual(small_gabor, condition_floor=0.5)
    assert info.value.upper > 0
    assert info.value.ratio < 0.5


@pytest.mark.unit
def test_canonical_dual_condition_on_subspace(small_gabor):
    """Test the condition check on a test span sees a direction S does not reach."""
    atom = small_gabor.vectors[:, np.argmin(small_gabor.domain.basepoint_distances)]
    nyquist = (-1.0) ** np.arange(small_gabor.dim)
    Q = linalg.orth(np.column_stack([atom, nyquist / np.linalg.norm(nyquist)]))

    with pytest.raises(IllConditionedFrameError) as info:
        canonical_dual(small_gabor, subspace=Q)

    assert info.value.ratio < 1e-8
    check_condition(small_gabor, 1e-8, subspace=(atom / np.linalg.norm(atom))[:, None])
    assert canonical_dual(small_gabor).kind == "canonical"


@pytest.mark.unit
def test_parseval_dual_tolerance(gabor_default):
    """Test the identification dual is refused on a lattice too coarse to be near-Parseval."""
    Q = gabor_interior_subspace(gabor_default)
    assert parseval_dual(gabor_default, Q, tolerance=0.05).kind == "parseval"

    coarse = gabor_gaussian_frame(sample_grid(SpaceTag.EUCLIDEAN_2D, 0.5, 6.0))
    with pytest.raises(FrameError, match="not near-Parseval"):
        parseval_dual(coarse, gabor_interior_subspace(coarse), tolerance=0.05)
    assert parseval_dual(coarse).vectors is coarse.vectors


@pytest.mark.unit
def test_parseval_and_tight_duals(small_bergman):
    """Test identification duals and their upper bounds."""
    bounds = frame_bounds(small_bergman)
    dual = parseval_dual(small_bergman)
    assert dual.vectors is small_bergman.vectors
    assert dual.upper_bound == pytest.approx(bounds.upper)

    A = haar_admissibility_constant()
    tight = tight_dual(small_bergman, A)
    np.testing.assert_allclose(tight.vectors, small_bergman.vectors / A)
    assert tight.upper_bound == pytest.approx(bounds.upper / A ** 2)
    with pytest.raises(FrameError):
        tight_dual(small_bergman, 0.0)


@pytest.mark.unit
def test_reconstruct_with_parseval_dual(small_bergman):
    """Test reconstruction through the identification dual equals S f."""
    f = small_bergman.vectors[:, 0]
    np.testing.assert_allclose(
        reconstruct(parseval_dual(small_bergman), f), frame_operator(small_bergman) @ f, atol=1e-12
    )


@pytest.mark.unit
def test_transformed_family_shape(small_bergman):
    """Test a transformed family needs one vector per node."""
    vectors = small_bergman.vectors
    family = TransformedFamily(small_bergman.domain, vectors, label="identity")
    assert family.dim == small_bergman.dim
    assert len(family) == len(small_bergman)
    with pytest.raises(FrameError):
        TransformedFamily(small_bergman.domain, vectors[:, :-1])
