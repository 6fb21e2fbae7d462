"""Unit tests for weak-localization diagnostics."""

import numpy as np
import pytest
from scipy import optimize, special

from weakloc.core.errors import LocalizationError
from weakloc.frames import (
    SampledFrame,
    TransformedFamily,
    gabor_gaussian_frame,
    haar_wavelet_frame,
    orthonormal_test_frame,
)
from weakloc.frames.families import BergmanKernelFamily, HaarWaveletFamily
from weakloc.geometry import SampledDomain, SpaceTag, line_domain, sample_grid, space_for
from weakloc.localization import (
    KernelMatrix,
    Weight,
    WeightTag,
    check_weak_localization,
    compose_kernels,
    kernel_matrix,
    localization_report,
    parse_weight,
    pointwise_localization_check,
    rho,
    schur_margins,
    tail_profile,
)

GAUSS_STEP = 0.02


@pytest.fixture(scope="module")
def gaussian_kernel():
    """1-D Gaussian kernel exp(-(x - y)^2 / 4) on [-12, 12]."""
    domain = line_domain(GAUSS_STEP, 12.0)
    return KernelMatrix.from_function(domain, lambda d: np.exp(-d ** 2 / 4.0), label="gauss")


@pytest.fixture(scope="module")
def gabor_frame():
    """Gabor frame at step 1/2 inside radius 6."""
    return gabor_gaussian_frame(sample_grid(SpaceTag.EUCLIDEAN_2D, 0.5, 6.0))


def _gauss_tail(R):
    return 2 * np.sqrt(np.pi) * special.erfc(R / 2)


@pytest.mark.unit
def test_orthonormal_kernel_is_identity():
    """Test the orthonormal pair gives the identity kernel and unit margins."""
    frame = orthonormal_test_frame(5)
    K = kernel_matrix(frame)
    np.testing.assert_array_equal(K.entries, np.eye(5))
    assert tuple(schur_margins(K, None, Weight.constant())) == (1.0, 1.0)
    profile = tail_profile(K, None, Weight.constant(), radii=[0.0, 0.5, 1.0])
    assert all(t.row == 0.0 and t.col == 0.0 for t in profile)


@pytest.mark.unit
def test_gabor_kernel_entry(gabor_frame):
    """Test the Gabor kernel entry between (0, 0) and (2, 0)."""
    K = kernel_matrix(gabor_frame)
    domain = gabor_frame.domain
    i, j = domain.nearest_node((0.0, 0.0)), domain.nearest_node((2.0, 0.0))
    assert K.entries[i, j] == pytest.approx(np.exp(-1.0), rel=1e-12)
    assert K.symmetric


@pytest.mark.unit
def test_bergman_kernel_entry():
    """Test the Bergman kernel entry between 0 and 1/2."""
    space = space_for(SpaceTag.BERGMAN_DISC)
    domain = SampledDomain(space, np.array([[0.0, 0.0], [0.5, 0.0]]), np.ones(2), 1.0, 0.5)
    K = kernel_matrix(SampledFrame(domain, BergmanKernelFamily(60)))
    assert K.entries[0, 1] == pytest.approx(0.75, abs=1e-12)


@pytest.mark.unit
def test_transformed_family_kernel(gabor_frame):
    """Test the realization path reproduces the closed-form kernel."""
    moved = TransformedFamily(gabor_frame.domain, gabor_frame.vectors.copy(), label="identity")
    K = kernel_matrix(moved, gabor_frame)
    np.testing.assert_allclose(K.entries, np.abs(gabor_frame.gram), atol=1e-9)
    assert K.label == "identity"


@pytest.mark.unit
def test_kernel_domain_mismatch(gabor_frame):
    """Test families over different domains are rejected."""
    other = gabor_gaussian_frame(sample_grid(SpaceTag.EUCLIDEAN_2D, 0.5, 3.0))
    with pytest.raises(LocalizationError):
        kernel_matrix(gabor_frame, other)
    with pytest.raises(LocalizationError):
        kernel_matrix(TransformedFamily(other.domain, other.vectors))


@pytest.mark.unit
def test_kernel_matrix_validation():
    """Test kernel shape and sign checks."""
    domain = line_domain(1.0, 1.0)
    with pytest.raises(LocalizationError):
        KernelMatrix(np.ones((2, 2)), domain, "bad")
    with pytest.raises(LocalizationError):
        KernelMatrix(-np.ones((3, 3)), domain, "bad")


@pytest.mark.unit
def test_gaussian_margins(gaussian_kernel):
    """Test Schur margins of the 1-D Gaussian kernel against 2 sqrt(pi)."""
    row, col = schur_margins(gaussian_kernel, None, Weight.constant())
    assert row == pytest.approx(2 * np.sqrt(np.pi), rel=0.02)
    assert col == pytest.approx(row, rel=1e-12)


@pytest.mark.unit
def test_gaussian_tail(gaussian_kernel):
    """Test the tail at R = 2 against 2 sqrt(pi) erfc(1)."""
    (entry,) = tail_profile(gaussian_kernel, None, Weight.constant(), radii=[2.0])
    assert entry.row == pytest.approx(_gauss_tail(2.0), rel=0.05)
    assert entry.row == pytest.approx(0.558, rel=0.05)


@pytest.mark.unit
def test_gaussian_rho(gaussian_kernel):
    """Test rho(0.1) against the erfc inversion."""
    oracle = optimize.brentq(lambda R: _gauss_tail(R) - 0.1, 1.0, 6.0)
    entry = rho(gaussian_kernel, None, Weight.constant(), 0.1)
    assert entry.achieved
    assert abs(entry.R_high - oracle) <= 2.5 * GAUSS_STEP
    assert entry.R_high - entry.R_low == pytest.approx(GAUSS_STEP)


@pytest.mark.unit
def test_tail_profile_monotone_and_unavailable(gaussian_kernel):
    """Test tails are nonincreasing and empty interiors are unavailable."""
    profile = tail_profile(gaussian_kernel, None, Weight.constant(), radii=np.arange(0.0, 14.0, 0.5))
    available = [t.row for t in profile if t.available]
    assert available == sorted(available, reverse=True)
    assert not profile[-1].available
    assert profile[-1].row is None and profile[-1].col is None
    assert profile[0].interior_fraction == 1.0


@pytest.mark.unit
def test_rho_table_monotone(gaussian_kernel):
    """Test rho is nonincreasing in eps."""
    report = localization_report(
        gaussian_kernel, None, Weight.constant(),
        radii=np.arange(0.0, 12.0, 0.1), eps_list=[0.3, 0.05, 0.1, 1.0]
    )
    eps = [r.eps for r in report.rho_table]
    assert eps == sorted(eps)
    highs = [r.R_high for r in report.rho_table]
    assert highs == sorted(highs, reverse=True)
    assert report.rho_for(0.1).R_high == highs[1]
    with pytest.raises(LocalizationError):
        report.rho_for(0.7)


@pytest.mark.unit
def test_rho_zero_kernel_and_errors():
    """Test rho of the zero kernel and invalid inputs."""
    domain = line_domain(0.5, 3.0)
    K = KernelMatrix(np.zeros((len(domain), len(domain))), domain, "zero")
    entry = rho(K, None, Weight.constant(), 0.01)
    assert entry.R_high == 0.0
    with pytest.raises(LocalizationError):
        rho(K, None, Weight.constant(), 0.0)
    with pytest.raises(LocalizationError):
        tail_profile(K, None, Weight.constant(), radii=[1.0, 0.5])


@pytest.mark.unit
def test_rho_not_reached():
    """Test rho is marked unreached when tails never fall below eps."""
    domain = line_domain(0.5, 3.0)
    K = KernelMatrix(np.ones((len(domain), len(domain))), domain, "ones")
    entry = rho(K, None, Weight.constant(), 1e-3)
    assert not entry.achieved
    assert entry.R_high is None


@pytest.mark.unit
def test_weight_scaling_invariance(gaussian_kernel):
    """Test margins and tails are invariant under p -> 3 p."""
    p = Weight.custom(lambda X: 1.0 + X[:, 0] ** 2, label="quadratic")
    base = schur_margins(gaussian_kernel, None, p)
    scaled = schur_margins(gaussian_kernel, None, p.scaled(3.0))
    assert scaled.row == pytest.approx(base.row, rel=1e-12)
    assert scaled.col == pytest.approx(base.col, rel=1e-12)
    t1 = tail_profile(gaussian_kernel, None, p, radii=[1.0, 3.0])
    t2 = tail_profile(gaussian_kernel, None, p.scaled(3.0), radii=[1.0, 3.0])
    for a, b in zip(t1, t2):
        assert b.row == pytest.approx(a.row, rel=1e-12)


@pytest.mark.unit
def test_symmetric_margins_agree(gabor_frame):
    """Test row and column margins agree for F = G."""
    row, col = schur_margins(kernel_matrix(gabor_frame), None, Weight.constant())
    assert row == pytest.approx(col, rel=1e-12)


@pytest.mark.unit
def test_check_weak_localization_orthonormal():
    """Test the orthonormal pair is localized."""
    K = kernel_matrix(orthonormal_test_frame(5))
    verdict = check_weak_localization(localization_report(K, None, Weight.constant()))
    assert verdict
    assert verdict.reasons == []


@pytest.mark.unit
def test_check_weak_localization_gabor(gabor_frame):
    """Test the Gabor pair is localized with caps (10, 0.05)."""
    report = localization_report(kernel_matrix(gabor_frame), None, Weight.constant())
    verdict = check_weak_localization(report, margin_cap=10.0, tail_floor=0.05)
    assert verdict.localized, verdict.reasons
    assert report.schur_row_margin < 3.0


@pytest.mark.unit
def test_check_weak_localization_constant_kernel():
    """Test the constant kernel fails and its margin grows with truncation."""
    margins = []
    for R in (3.0, 6.0):
        domain = sample_grid(SpaceTag.EUCLIDEAN_2D, 0.5, R)
        K = KernelMatrix(np.ones((len(domain), len(domain))), domain, "ones")
        report = localization_report(K, None, Weight.constant())
        margins.append(report.schur_row_margin)
        verdict = check_weak_localization(report)
        assert not verdict
        assert any("exceeds cap" in r for r in verdict.reasons)
    assert margins[1] > 3 * margins[0]


@pytest.mark.unit
def test_composed_kernel_margins(gabor_frame, gaussian_kernel):
    """Test margins of a composed kernel are bounded by the product of margins."""
    K1 = kernel_matrix(gabor_frame)
    K2 = KernelMatrix.from_function(gabor_frame.domain, lambda d: np.exp(-d), label="exp")
    for p in (Weight.constant(), Weight.custom(lambda X: np.exp(0.1 * X[:, 0]), label="tilt")):
        m1 = schur_margins(K1, None, p)
        m2 = schur_margins(K2, None, p)
        m = schur_margins(compose_kernels(K1, K2), None, p)
        assert m.row <= m1.row * m2.row * (1 + 1e-10)
        assert m.col <= m1.col * m2.col * (1 + 1e-10)
    with pytest.raises(LocalizationError):
        compose_kernels(K1, gaussian_kernel)


@pytest.mark.unit
def test_report_to_dict(gaussian_kernel):
    """Test the serialized report fields."""
    report = localization_report(gaussian_kernel, None, Weight.constant(), radii=[0.0, 13.0], eps_list=[0.5])
    data = report.to_dict()
    assert set(data) == {"kernel", "weight", "schur_row_margin", "schur_col_margin", "tail_profile", "rho_table"}
    assert data["tail_profile"][1]["row"] is None
    assert data["weight"]["weight"] == "const"
    assert data["rho_table"][0]["eps"] == 0.5


@pytest.mark.unit
@pytest.mark.parametrize("M, C", [(0.6, 10.0), (0.75, 1000.0), (1.0, 1000.0)])
def test_haar_fails_pointwise_bound(M, C):
    """Test the Haar frame violates the pointwise exponential bound."""
    frame = haar_wavelet_frame(sample_grid(SpaceTag.AFFINE_GROUP, 0.35, 2.5))
    check = pointwise_localization_check(frame, M, C)
    assert check.violated
    assert check.max_violation > 0
    assert check.to_dict()["violated"] is True


@pytest.mark.unit
def test_pointwise_check_trivial_cases():
    """Test no violation for orthonormal and disjoint-support families."""
    check = pointwise_localization_check(orthonormal_test_frame(6), 1.0, 1.0)
    assert check.max_violation <= 0

    space = space_for(SpaceTag.AFFINE_GROUP)
    nodes = np.array([[1.0, 0.0], [1.0, 5.0]])
    domain = SampledDomain(space, nodes, np.ones(2), 4.0, 1.0)
    frame = SampledFrame(domain, HaarWaveletFamily.for_nodes(nodes))
    check = pointwise_localization_check(frame, 1.0, 1.0, include_far_pairs=False)
    assert check.max_violation <= 0
    assert check.pairs_checked == 4
    with pytest.raises(LocalizationError):
        pointwise_localization_check(frame, 0.0, 1.0)


@pytest.mark.unit
def test_haar_weighted_margins_stable():
    """Test Haar margins with weight a^(1/2 - delta) stay below the cap at two radii."""
    p = Weight.power_affine(0.1)
    margins = []
    for R in (2.5, 3.0):
        frame = haar_wavelet_frame(sample_grid(SpaceTag.AFFINE_GROUP, 0.35, R))
        m = schur_margins(kernel_matrix(frame), None, p)
        assert max(m.row, m.col) < 10.0
        margins.append(max(m.row, m.col))
    assert abs(margins[1] - margins[0]) <= 0.1 * margins[0]


@pytest.mark.unit
def test_weights():
    """Test weight evaluation, validation and parsing."""
    X = np.array([[4.0, 1.0], [0.25, -2.0]])
    np.testing.assert_allclose(Weight.power_affine(0.1).eval(X), X[:, 0] ** 0.4)
    Z = np.array([[0.0, 0.0], [0.6, 0.0]])
    np.testing.assert_allclose(Weight.power_disc(0.5).eval(Z), [1.0, 0.8])
    np.testing.assert_array_equal(Weight.constant(2.0).eval(X), [2.0, 2.0])

    assert parse_weight("const").tag is WeightTag.CONSTANT
    assert parse_weight("power-affine:0.2").param == 0.2
    assert parse_weight("power-disc").param == 0.5
    with pytest.raises(LocalizationError):
        parse_weight("power-affine:0.7")
    with pytest.raises(LocalizationError):
        parse_weight("gaussian")
    with pytest.raises(LocalizationError):
        parse_weight("const:abc")
    with pytest.raises(LocalizationError):
        Weight.custom(lambda X: -np.ones(len(X))).eval(X)
