import numpy as np
import pytest

from korovkit import ScalarFunction, make_bernstein, make_szasz, make_tensor, progress_tracking
from korovkit import check_statement_a, check_statement_b, check_statement_c, check_corollary, equivalence_harness, rate_fit, default_battery
from korovkit.korovkin import TestSet, converges, trend_decreasing
from korovkit.modules.families import freeze_family, scale_family
from korovkit.modules.utils import Lattice
from korovkit.errors import InputError, InsufficientDataError


NS = (10, 100, 1000)


def grid(domain, box='K1', resolution=9):
	return Lattice.over(getattr(domain, box), resolution).points()


def test_trend_decreasing():
	assert trend_decreasing([3., 2., 1.])
	assert trend_decreasing([1., 0., 0.])
	assert not trend_decreasing([3., 3., 1.])
	assert not trend_decreasing([1., 2.])


def test_converges():
	assert converges([1e-1, 1e-2, 1e-4], 1e-3)
	assert not converges([1e-1, 1e-2, 1e-2], 1e-1)
	assert not converges([1e-1, 1e-2, 5e-3], 1e-3)


def test_rate_fit():
	fit = rate_fit([(n, 2. / n) for n in NS])

	np.testing.assert_allclose(fit.slope, -1., rtol=1e-12)
	np.testing.assert_allclose(fit.intercept, np.log(2.), rtol=1e-12)
	assert not fit.partial


def test_rate_fit_of_zero_defects():
	assert rate_fit([(n, 0.) for n in NS]).slope == -np.inf
	assert rate_fit([(10, 1.), (100, 0.1), (1000, 0.)]).partial


def test_rate_fit_needs_three_points():
	with pytest.raises(InsufficientDataError):
		rate_fit([(10, 1.), (100, 0.1)])


def test_test_set(g):
	tests = TestSet.build(2, g, codim=3)

	assert tests.labels == ['1', 'pr1', 'pr2', 'g']
	assert tests.constants.shape == (4, 3)


def test_statement_b_for_bernstein(bernstein_pairs, g):
	report = check_statement_b(bernstein_pairs, g, grid(bernstein_pairs[0].domain))

	assert report.verdict
	assert list(report.per_test) == ['const', '1', 'pr1', 'g']
	np.testing.assert_allclose([defect for _, defect in report.per_test['g']], [0.25 / n for n in NS], rtol=1e-9)
	np.testing.assert_allclose(report.rates['g'].slope, -1., atol=1e-6)
	assert report.per_test['pr1'] == [(n, 0.) for n in NS]


def test_statement_a_for_bernstein(bernstein_pairs, g):
	report = check_statement_a(bernstein_pairs, g, grid(bernstein_pairs[0].domain))

	assert report.verdict
	assert list(report.per_test) == ['const', '1', 'snh']
	np.testing.assert_allclose(report.per_test['snh'][-1][1], 0.25 / 1000, rtol=1e-9)
	assert report.identity_gap < 1e-9


def test_statements_for_szasz(szasz_pairs, g):
	K1 = grid(szasz_pairs[0].domain, resolution=11)
	a = check_statement_a(szasz_pairs, g, K1, threshold=1e-2)
	b = check_statement_b(szasz_pairs, g, K1, threshold=1e-2)

	assert a.verdict and b.verdict
	np.testing.assert_allclose(a.per_test['snh'][-1][1], 1e-3, rtol=1e-9)
	assert a.witnesses['snh'][0].tolist() == [1.]


def test_scaled_weights_fail(bernstein_pairs, g):
	pairs = [scale_family(pair, 0.9) for pair in bernstein_pairs]
	K1 = grid(pairs[0].domain)

	b = check_statement_b(pairs, g, K1)
	c = check_statement_c(pairs, default_battery(pairs[0].domain), g, K1)

	assert not b.verdict
	assert not b.converged['const']
	np.testing.assert_allclose(b.per_test['const'][-1][1], 0.1, rtol=1e-9)
	assert not c.verdict


def test_drifting_mass_fails(bernstein_pairs, g):
	pairs = [scale_family(pair, lambda n: 1 + 0.1 * (-1) ** n) for pair in bernstein_pairs]
	K1 = grid(pairs[0].domain)

	assert not check_statement_b(pairs, g, K1).verdict
	assert not check_statement_c(pairs, default_battery(pairs[0].domain), g, K1).verdict


def test_slowly_vanishing_mass_defect_rate(bernstein_pairs, g):
	pairs = [scale_family(pair, lambda n: 1 + 1 / np.sqrt(n)) for pair in bernstein_pairs]
	report = check_statement_b(pairs, g, grid(pairs[0].domain))

	np.testing.assert_allclose(report.rates['1'].slope, -0.5, atol=1e-9)
	assert not report.verdict


def test_frozen_family_does_not_converge(g):
	base = make_bernstein(10)
	pairs = [freeze_family(base, n) for n in NS]
	report = check_statement_b(pairs, g, grid(base.domain))

	assert not report.verdict
	assert report.converged['const']
	assert not report.converged['g']


def test_statement_c_without_targets_is_vacuous(bernstein_pairs, g):
	report = check_statement_c(bernstein_pairs, [], g, grid(bernstein_pairs[0].domain))

	assert report.verdict
	assert report.per_test == {}


def test_statement_c_rejects_targets_outside_the_growth_class(szasz_pairs, g):
	targets = [
		('sq', ScalarFunction(lambda u: u[:, 0] ** 2)),
		('fast', ScalarFunction(lambda u: np.exp(u[:, 0] ** 2)))
	]
	report = check_statement_c(szasz_pairs, targets, g, grid(szasz_pairs[0].domain, resolution=5), threshold=1e-2)

	assert [label for label, _, _ in report.rejected] == ['fast']
	assert list(report.per_test) == ['sq']
	assert report.verdict


def test_pairs_must_be_increasing(g):
	with pytest.raises(InsufficientDataError):
		check_statement_b([make_bernstein(10), make_bernstein(20)], g)

	with pytest.raises(InputError):
		check_statement_b([make_bernstein(10), make_bernstein(30), make_bernstein(20)], g)


def test_corollary(bernstein_pairs):
	domain = bernstein_pairs[0].domain
	report = check_corollary(bernstein_pairs, default_battery(domain), grid(domain, 'K', 21))

	assert report.verdict
	np.testing.assert_allclose(report.per_test['gamma_sq'][-1][1], 0.25 / 1000, rtol=1e-9)


def test_corollary_needs_a_compact_domain(szasz_pairs):
	with pytest.raises(InputError):
		check_corollary(szasz_pairs, [])


def test_equivalence_for_bernstein(bernstein_pairs, g):
	domain = bernstein_pairs[0].domain
	fractions = []

	with progress_tracking(lambda fraction, stage: fractions.append(fraction)):
		report = equivalence_harness(bernstein_pairs, g, K1_grid=grid(domain), K_grid=grid(domain, 'K', 21))

	assert report.verdicts == {name: True for name in ('a', 'b', 'c', 'd', 'e', 'f', 'corollary')}
	assert report.findings == []
	assert list(report.statements['d'].per_test) == ['mix']
	assert 'const' not in report.statements['f'].per_test
	assert fractions[-1] == 1.
	assert fractions == sorted(fractions)


def test_equivalence_for_scaled_weights(bernstein_pairs, g):
	pairs = [scale_family(pair, 0.9) for pair in bernstein_pairs]
	domain = pairs[0].domain
	report = equivalence_harness(pairs, g, K1_grid=grid(domain), K_grid=grid(domain, 'K', 11))
	verdicts = report.verdicts

	assert not verdicts['a'] and not verdicts['b'] and not verdicts['c']
	assert not report.verdict


def test_equivalence_in_two_dimensions(g):
	pairs = [make_tensor(make_bernstein(n), 2) for n in (5, 10, 20)]
	domain = pairs[0].domain
	targets = [('smooth', ScalarFunction(lambda u: np.sin(u[:, 0]) * np.cos(u[:, 1])))]
	report = equivalence_harness(pairs, g, targets, threshold=0.1, K1_grid=grid(domain, resolution=3), K_grid=grid(domain, 'K', 3))

	assert report.verdict
	assert list(report.statements['b'].per_test) == ['const', '1', 'pr1', 'pr2', 'g']
	assert report.statements['d'].per_test == {}


def test_rows(bernstein_pairs, g):
	report = equivalence_harness(bernstein_pairs, g, targets=[], K1_grid=grid(bernstein_pairs[0].domain, resolution=3), K_grid=grid(bernstein_pairs[0].domain, 'K', 3))
	rows = list(report.rows())

	assert set(rows[0]) == {'statement', 'label', 'n', 'defect', 'slope', 'verdict'}
	assert [row['n'] for row in rows[:3]] == list(NS)
