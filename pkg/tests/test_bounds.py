import numpy as np
import pytest

from korovkit import Domain, ScalarFunction, VectorFunction, WeakNeighborhood, make_bernstein, make_szasz, make_gauss_weierstrass
from korovkit import shisha_mond_bound, uniform_bound, domination_bound, estimate_M, growth_bound, growth_bound_forms
from korovkit import neighborhood_bound, estimate_neighborhood_M, measured_error
from korovkit.modules.families import scale_family
from korovkit.errors import DomainError, GrowthViolation, ModeError, TruncationError


def test_shisha_mond_for_bernstein(square):
	report = shisha_mond_bound(make_bernstein(100), square, 0.5)

	np.testing.assert_allclose(report.delta, 0.05, rtol=1e-9)
	np.testing.assert_allclose(report.omega, 0.0975, rtol=1e-9)
	np.testing.assert_allclose(report.bound, 0.195, rtol=1e-9)
	np.testing.assert_allclose(report.measured, 0.0025, rtol=1e-9)
	assert report.valid
	np.testing.assert_allclose(report.reconstruct(), report.bound, rtol=1e-12)


def test_shisha_mond_with_explicit_delta(square):
	report = shisha_mond_bound(make_bernstein(100), square, 0.5, delta=0.1)

	np.testing.assert_allclose(report.omega, 0.19, rtol=1e-9)
	np.testing.assert_allclose(report.bound, 0.19 * (1 + 0.25), rtol=1e-9)


@pytest.mark.parametrize('t', [0., 1.])
def test_shisha_mond_at_the_boundary(square, t):
	report = shisha_mond_bound(make_bernstein(10), square, t)

	assert report.gamma_sq == 0.
	assert report.delta is None
	assert report.bound < 1e-14
	assert report.valid


def test_shisha_mond_needs_a_compact_domain(square):
	with pytest.raises(ModeError):
		shisha_mond_bound(make_szasz(10), square, 1.)


@pytest.mark.parametrize('n', [5, 50])
def test_shisha_mond_is_valid_across_K(n):
	pair = make_bernstein(n)
	F = VectorFunction(2, lambda u: np.stack([np.abs(u[:, 0] - 0.3), np.sin(4 * u[:, 0])], axis=1))

	assert all(shisha_mond_bound(pair, F, t).valid for t in np.linspace(0, 1, 11))


def test_uniform_bound(square):
	report = uniform_bound(make_bernstein(20), square)

	assert report.t is None
	assert report.form == 'uniform'
	np.testing.assert_allclose(report.measured, 0.25 / 20, rtol=1e-9)
	np.testing.assert_allclose(report.gamma_sq, 0.25 / 20, rtol=1e-9)
	assert report.valid


def test_uniform_bound_sees_the_constant_defect(square):
	report = uniform_bound(scale_family(make_bernstein(20), 0.9), square)

	np.testing.assert_allclose(report.const_defect, 0.1, rtol=1e-9)
	assert report.valid


def test_domination_bound(square):
	report = domination_bound(make_szasz(20), square, 1.)

	assert report.valid
	np.testing.assert_allclose(report.reconstruct(), report.bound, rtol=1e-12)


def test_measured_error(square):
	errors, sup = measured_error(make_bernstein(10), square, [[0.], [0.5], [1.]])

	np.testing.assert_allclose(errors, [0., 0.025, 0.], atol=1e-15)
	assert sup == errors[1]


def test_estimate_M_for_szasz(square, g):
	domain = make_szasz(10).domain
	M = estimate_M(square, g, domain)

	assert 2.9 <= M.M <= 3.1
	assert M.grid_meta['nu_schedule'] == [5., 10., 20.]
	assert M.nu == 20.
	np.testing.assert_allclose(M.mid_ratio_max, 3., rtol=1e-9)
	assert M.far_ratio_max < M.mid_ratio_max
	assert M.grid_meta['B_nu'][0][0] == 0.


def test_estimate_M_on_a_compact_domain(square, g):
	M = estimate_M(square, g, make_bernstein(10).domain)

	assert M.M == 0.
	assert M.far_ratio_max == 0.


def test_estimate_M_rejects_fast_growth(g):
	F = ScalarFunction(lambda u: np.exp(u[:, 0] ** 2), label='exp(u^2)')

	with pytest.raises(GrowthViolation):
		estimate_M(F, g, make_szasz(10).domain)


def test_estimate_M_needs_a_far_region(square, g):
	domain = Domain.from_bounds(X=[(0., np.inf)], K=[(0., 2.)], K1=[(0., 1.)], truncation_radius=0.5)

	with pytest.raises(TruncationError):
		estimate_M(square, g, domain)


def test_growth_bound_for_szasz(square, g):
	pair = make_szasz(100)
	M = estimate_M(square, g, pair.domain)
	forms = growth_bound_forms(pair, square, g, 1., M=M)
	best = growth_bound(pair, square, g, 1., M=M)

	assert [report.form for report in forms] == ['growth', 'constant_preserving', 'linear_preserving']
	assert best.form == 'linear_preserving'
	np.testing.assert_allclose(best.snh, 0.01, rtol=1e-9)
	np.testing.assert_allclose(best.measured, 0.01, rtol=1e-9)

	for report in forms:
		assert report.valid
		np.testing.assert_allclose(report.reconstruct(), report.bound, rtol=1e-12)


def test_growth_bound_without_constant_preservation(square, g):
	pair = scale_family(make_szasz(100), 0.95)
	forms = growth_bound_forms(pair, square, g, 0.5)

	assert [report.form for report in forms] == ['growth']
	assert forms[0].valid


@pytest.mark.parametrize('n', [10, 100])
def test_growth_bound_for_gauss_weierstrass(g, n):
	pair = make_gauss_weierstrass(n)
	F = ScalarFunction(lambda u: np.sin(u[:, 0]), label='sin')
	M = estimate_M(F, g, pair.domain, resolution=101)

	assert all(growth_bound(pair, F, g, t, M=M).valid for t in (-0.5, 0., 0.5))


def test_growth_bound_needs_t_in_K1(square, g):
	with pytest.raises(DomainError):
		growth_bound(make_szasz(10), square, g, 1.5)


def test_neighborhood_bound(square, g):
	pair = make_szasz(50)
	nbhd = WeakNeighborhood.coordinate(1, 0.1)
	M = estimate_neighborhood_M(square, g, pair.domain, nbhd, resolution=101)
	report = neighborhood_bound(pair, square, g, 1., nbhd, M=M, resolution=101)

	assert report.form == 'neighborhood'
	assert report.valid
	np.testing.assert_allclose(report.reconstruct(), report.bound, rtol=1e-12)
	assert M.M >= M.mid_ratio_max
