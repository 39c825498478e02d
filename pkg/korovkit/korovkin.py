import logging
import numpy as np
from dataclasses import dataclass, field

from .interfaces import Domain, GrowthFunction, ScalarFunction, VectorFunction, as_points
from .errors import GrowthViolation, InputError, InsufficientDataError
from .core import GROWTH_RATIO_LIMIT, as_vector_function, growth_ratio, sampling_lattice
from .operators import apply_L, apply_S, apply_S_h, gamma_sq, h_identity_gap
from .context import SweepContext
from .modules.utils import Lattice, spread_unit_vectors


logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 1e-3
ZERO_DEFECT = 1e-13
IDENTITY_TOLERANCE = 1e-9

# implying statement -> implied statement
IMPLICATIONS = (('b', 'a'), ('a', 'c'), ('d', 'c'), ('f', 'b'))


@dataclass
class TestSet:
	'''{1, pr_1..pr_m, g} plus well-spread unit constants of E = R^k.'''
	__test__ = False

	functions: list
	constants: np.ndarray

	@classmethod
	def build(cls, dim, g, codim=1):
		functions = [('1', ScalarFunction.constant(1.))]
		functions += [('pr%d' % (i + 1), ScalarFunction.projection(i)) for i in range(dim)]
		functions.append(('g', g.as_scalar()))

		return cls(functions=functions, constants=spread_unit_vectors(codim))

	@property
	def labels(self):
		return [label for label, _ in self.functions]



@dataclass
class RateFit:
	slope: float
	intercept: float
	residual: float
	partial: bool = False



@dataclass
class StatementReport:
	statement: str
	threshold: float
	per_test: dict = field(default_factory=dict)
	rates: dict = field(default_factory=dict)
	converged: dict = field(default_factory=dict)
	witnesses: dict = field(default_factory=dict)
	rejected: list = field(default_factory=list)
	identity_gap: float = 0.
	verdict: bool = False

	def conclude(self):
		for label, series in self.per_test.items():
			self.rates[label] = rate_fit(series)
			self.converged[label] = converges([defect for _, defect in series], self.threshold)

		self.verdict = all(self.converged.values())
		logger.debug('statement %s: verdict %s (%s)', self.statement, self.verdict, self.converged)
		return self

	def decreasing(self):
		return all(trend_decreasing([defect for _, defect in series]) for series in self.per_test.values())

	def last_defects(self):
		return {label: series[-1][1] for label, series in self.per_test.items()}



@dataclass
class ConvergenceReport:
	statements: dict = field(default_factory=dict)
	findings: list = field(default_factory=list)
	identity_gap: float = 0.
	threshold: float = DEFAULT_THRESHOLD

	@property
	def verdicts(self):
		return {name: report.verdict for name, report in self.statements.items()}

	@property
	def verdict(self):
		return all(self.verdicts.values())

	def rows(self):
		for name, report in self.statements.items():
			for label, series in report.per_test.items():
				for n, defect in series:
					yield {
						'statement': name,
						'label': label,
						'n': n,
						'defect': defect,
						'slope': report.rates[label].slope,
						'verdict': report.converged[label]
					}



def clean(defect):
	return 0. if defect <= ZERO_DEFECT else float(defect)


def trend_decreasing(defects):
	# zero may stay at zero
	return all(b < a or a == b == 0 for a, b in zip(defects, defects[1:]))


def converges(defects, threshold):
	'''Last defect below threshold and a decreasing trend over the last two refinements.'''
	return defects[-1] <= threshold and trend_decreasing(defects[-3:])


def rate_fit(series: list):
	# least squares of log defect against log n
	if len(series) < 3:
		raise InsufficientDataError('a rate fit needs at least 3 values of n, got %d' % len(series))

	n = np.array([n for n, _ in series], dtype=float)
	defects = np.array([defect for _, defect in series], dtype=float)
	positive = defects > 0

	if not np.any(positive):
		return RateFit(slope=-np.inf, intercept=-np.inf, residual=0.)

	partial = not np.all(positive)

	if np.count_nonzero(positive) < 2:
		return RateFit(slope=-np.inf, intercept=float(np.log(defects[positive][0])), residual=0., partial=partial)

	x = np.log(n[positive])
	y = np.log(defects[positive])
	coefficients, residuals, _, _, _ = np.polyfit(x, y, 1, full=True)

	return RateFit(
		slope=float(coefficients[0]),
		intercept=float(coefficients[1]),
		residual=float(residuals[0]) if residuals.size else 0.,
		partial=partial
	)



def _check_pairs(pairs):
	if len(pairs) < 3:
		raise InsufficientDataError('convergence checks need at least 3 values of n, got %d' % len(pairs))

	ns = [pair.n for pair in pairs]

	if any(b <= a for a, b in zip(ns, ns[1:])):
		raise InputError('pairs must be indexed by strictly increasing n, got %s' % ns)


def _grid(pairs, grid, box='K1'):
	domain = pairs[0].domain

	if grid is None:
		return Lattice.over(getattr(domain, box), domain.grid_resolution).points()

	return as_points(grid, domain.dim)


def _sweep(report, pairs, label, defect_at, grid, context):
	series = []

	for pair in context.make_sweep_iter(pairs, stage='%s:%s' % (report.statement, label)):
		defects = np.array([defect_at(pair, t) for t in grid])
		index = int(np.argmax(defects))
		series.append((pair.n, clean(defects[index])))
		report.witnesses[label] = (grid[index], pair.n)

	report.per_test[label] = series


def _sweep_constants(report, pairs, constants, grid, context):
	def defect_at(pair, t):
		return max(np.linalg.norm(apply_L(pair, VectorFunction.constant(c), t) - c) for c in constants)

	_sweep(report, pairs, 'const', defect_at, grid, context)


def _sweep_tests(report, pairs, tests, grid, context):
	for label, f in tests.functions:
		def defect_at(pair, t, f=f):
			return abs(apply_S(pair, f, t) - f(t))

		_sweep(report, pairs, label, defect_at, grid, context)


def check_statement_b(pairs: list, g: GrowthFunction, K1_grid=None, threshold: float = DEFAULT_THRESHOLD, codim: int = 1, context: SweepContext = None):
	'''L_n(c) -> c, S_n(1) -> 1, S_n(pr_i) -> pr_i and S_n(g) -> g on the K1 grid.'''
	_check_pairs(pairs)
	grid = _grid(pairs, K1_grid)
	context = context or SweepContext()
	tests = TestSet.build(pairs[0].domain.dim, g, codim)
	report = StatementReport('b', threshold)

	_sweep_constants(report, pairs, tests.constants, grid, context)
	_sweep_tests(report, pairs, tests, grid, context)

	return report.conclude()


def check_statement_a(pairs: list, g: GrowthFunction, K1_grid=None, threshold: float = DEFAULT_THRESHOLD, codim: int = 1, context: SweepContext = None):
	'''
	L_n(c) -> c, S_n(1) -> 1 and S_n(h(t,.))(t) -> 0 on the K1 grid. The
	largest direct/expanded disagreement of S_n(h(t,.))(t) is kept on the report.
	'''
	_check_pairs(pairs)
	grid = _grid(pairs, K1_grid)
	context = context or SweepContext()
	tests = TestSet.build(pairs[0].domain.dim, g, codim)
	report = StatementReport('a', threshold)

	def snh_at(pair, t):
		report.identity_gap = max(report.identity_gap, h_identity_gap(pair, g, t))
		return apply_S_h(pair, g, t, mode='direct')

	_sweep_constants(report, pairs, tests.constants, grid, context)
	_sweep(report, pairs, '1', lambda pair, t: abs(apply_S(pair, ScalarFunction.constant(1.), t) - 1.), grid, context)
	_sweep(report, pairs, 'snh', snh_at, grid, context)

	return report.conclude()


def _admit_targets(targets, g, domain, report):
	points = sampling_lattice(domain, g).points()
	admitted = []

	for label, F in targets:
		try:
			ratio, witness = growth_ratio(F, g, points)
		except GrowthViolation as error:
			ratio, witness = error.ratio, error.witness

		if ratio > GROWTH_RATIO_LIMIT:
			logger.info('target %s rejected: |F|/g reaches %.3g at %s', label, ratio, np.asarray(witness).tolist())
			report.rejected.append((label, ratio, witness))
			continue

		admitted.append((label, F))

	return admitted


def check_statement_c(pairs: list, targets: list, g: GrowthFunction, K1_grid=None, threshold: float = DEFAULT_THRESHOLD, name: str = 'c', context: SweepContext = None):
	'''L_n(F)(t) -> F(t) and S_n(f)(t) -> f(t) for every admitted target, sup over the K1 grid.'''
	_check_pairs(pairs)
	grid = _grid(pairs, K1_grid)
	context = context or SweepContext()
	report = StatementReport(name, threshold)

	for label, F in _admit_targets(targets, g, pairs[0].domain, report):
		F = as_vector_function(F)

		def defect_at(pair, t, F=F):
			return float(np.linalg.norm(apply_L(pair, F, t) - F(t)))

		_sweep(report, pairs, label, defect_at, grid, context)

	return report.conclude()


def check_corollary(pairs: list, targets: list, K_grid=None, threshold: float = DEFAULT_THRESHOLD, codim: int = 1, context: SweepContext = None):
	'''
	Compact X = K: L_n(c) -> c and γ_n² -> 0 uniformly on K, and the target sup
	errors over K decrease.
	'''
	_check_pairs(pairs)
	domain = pairs[0].domain

	if not domain.bounded_mode:
		raise InputError('the compact-domain corollary needs X = K')

	grid = _grid(pairs, K_grid, box='K')
	context = context or SweepContext()
	report = StatementReport('corollary', threshold)

	_sweep_constants(report, pairs, spread_unit_vectors(codim), grid, context)
	_sweep(report, pairs, 'gamma_sq', gamma_sq, grid, context)

	for label, F in targets:
		F = as_vector_function(F)

		def defect_at(pair, t, F=F):
			return float(np.linalg.norm(apply_L(pair, F, t) - F(t)))

		_sweep(report, pairs, label, defect_at, grid, context)

	report.conclude()

	# targets only need to improve; the rate depends on their smoothness
	for label, _ in targets:
		report.converged[label] = trend_decreasing([defect for _, defect in report.per_test[label][-3:]])

	report.verdict = all(report.converged.values())
	return report



def default_battery(domain: Domain):
	lower, inner = domain.K.lower[0], domain.K1.lower[0]
	kink = (lower + inner) / 2 if inner > lower else lower - 1.

	return [
		('sin', ScalarFunction(lambda u: np.sin(u[:, 0]), label='sin(u1)')),
		('sq', ScalarFunction(lambda u: np.sum(u ** 2, axis=1), label='|u|^2')),
		('kink', ScalarFunction(lambda u: np.abs(u[:, 0] - kink), label='|u1-%r|' % kink)),
		('mix', VectorFunction(2, lambda u: np.stack([u[:, 0], np.exp(-u[:, 0])], axis=1), label='(u1,exp(-u1))'))
	]


def _is_vector(F):
	return isinstance(F, VectorFunction) and F.codim > 1


def equivalence_harness(pairs: list, g: GrowthFunction, targets: list = None, threshold: float = DEFAULT_THRESHOLD, K1_grid=None, K_grid=None, codim: int = 1):
	'''
	Runs statements a, b (test functions with pr_i), c, d (vector targets),
	e (scalar targets) and f (b without constants), plus the corollary on
	compact domains, and records implication inconsistencies as findings.
	'''
	_check_pairs(pairs)
	domain = pairs[0].domain
	targets = targets if targets is not None else default_battery(domain)
	sweeps = 6 + domain.dim + 2 * len(targets) + (2 + len(targets) if domain.bounded_mode else 0)
	context = SweepContext(total_steps=len(pairs) * sweeps)
	result = ConvergenceReport(threshold=threshold)

	b = check_statement_b(pairs, g, K1_grid, threshold, codim, context)
	a = check_statement_a(pairs, g, K1_grid, threshold, codim, context)
	c = check_statement_c(pairs, targets, g, K1_grid, threshold, 'c', context)
	d = check_statement_c(pairs, [p for p in targets if _is_vector(p[1])], g, K1_grid, threshold, 'd', context)
	e = check_statement_c(pairs, [p for p in targets if not _is_vector(p[1])], g, K1_grid, threshold, 'e', context)

	f = StatementReport('f', threshold)
	f.per_test = {label: series for label, series in b.per_test.items() if label != 'const'}
	f.witnesses = {label: witness for label, witness in b.witnesses.items() if label != 'const'}
	f.conclude()

	result.statements = {'a': a, 'b': b, 'c': c, 'd': d, 'e': e, 'f': f}
	result.identity_gap = a.identity_gap

	if domain.bounded_mode:
		result.statements['corollary'] = check_corollary(pairs, targets, K_grid, threshold, codim, context)

	context.finish()

	if result.identity_gap > IDENTITY_TOLERANCE:
		result.findings.append('direct and expanded S_n(h(t,.))(t) disagree by %.3e (relative)' % result.identity_gap)

	for implying, implied in IMPLICATIONS:
		source = result.statements[implying]
		target = result.statements[implied]

		if source.verdict and target.per_test and not target.decreasing():
			result.findings.append('%s holds but %s does not decrease' % (implying, implied))

	if b.verdict:
		grid = _grid(pairs, K1_grid)
		slope = float(np.max(np.linalg.norm(g.gradient(grid), axis=1)))
		limit = 3 * threshold * (1 + slope)
		excess = {label: defect for label, defect in a.last_defects().items() if defect > limit}

		if excess:
			result.findings.append('b holds but a exceeds %.3e at the largest n: %s' % (limit, excess))

	for finding in result.findings:
		logger.warning('finding: %s', finding)

	return result
