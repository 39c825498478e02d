from functools import reduce
import numpy as np
from scipy.stats import binom, poisson

from ...interfaces import Box, Domain, OperatorPair
from ...errors import ConfigurationError, DomainError, InputError
from .family import MeasureFamily


class BernsteinFamily(MeasureFamily):
	'''B_n(f)(t) = sum_k f(a + (b-a)k/n) C(n,k) z^k (1-z)^(n-k), z = (t-a)/(b-a).'''

	def __init__(self, n, a=0., b=1.):
		super().__init__(n, 1, 'bernstein', constant_preserving=True, metadata={'constant_defect': 0.})
		self.a = float(a)
		self.b = float(b)

	def compute_atoms(self, t):
		z = np.clip((t[0] - self.a) / (self.b - self.a), 0., 1.)
		k = np.arange(self.n + 1)

		return self.a + (self.b - self.a) * k / self.n, binom.pmf(k, self.n, z)



class SzaszFamily(MeasureFamily):
	'''
	Szász-Mirakjan atoms k/n with Poisson(nt) weights, truncated at the first
	kmax whose tail mass is below the tolerance.
	'''

	def __init__(self, n, tail=1e-14):
		super().__init__(n, 1, 'szasz', constant_preserving=True, metadata={'tail_tolerance': tail, 'truncation_tail': 0.})
		self.tail = tail

	def compute_atoms(self, t):
		mu = self.n * t[0]

		if mu < 0:
			raise DomainError('Szász operators are defined on [0, inf), got t=%r' % t[0])

		if mu == 0:
			return np.zeros(1), np.ones(1)

		kmax = int(poisson.isf(self.tail, mu))

		while poisson.sf(kmax, mu) >= self.tail:
			kmax += 1

		self.record('truncation_tail', float(poisson.sf(kmax, mu)))
		self.record('kmax', kmax)

		k = np.arange(kmax + 1)
		weights = poisson.pmf(k, mu)

		# kept atoms carry unit mass; the dropped tail is in the metadata
		return k / self.n, weights / np.sum(weights)



class GaussWeierstrassFamily(MeasureFamily):
	'''
	W_n(f)(t) = sqrt(n/pi) int f(u) exp(-n(u-t)^2) du by Gauss-Hermite
	quadrature after u = t + x/sqrt(n).
	'''

	def __init__(self, n, quad_points=64):
		x, w = np.polynomial.hermite.hermgauss(quad_points)
		weights = w / np.sqrt(np.pi)

		super().__init__(n, 1, 'gauss_weierstrass', constant_preserving=True, metadata={
			'quadrature_order': quad_points,
			'constant_defect': float(abs(np.sum(weights) - 1.))
		})

		self.offsets = x / np.sqrt(n)
		self.weights = weights

	def compute_atoms(self, t):
		return t[0] + self.offsets, self.weights



class TensorFamily(MeasureFamily):
	'''Products of one-dimensional atoms, one family per axis.'''

	def __init__(self, families):
		assert len({family.n for family in families}) == 1, 'tensor factors must share the process index'

		super().__init__(
			families[0].n,
			len(families),
			'tensor(%s)' % ','.join(family.label for family in families),
			constant_preserving=all(family.constant_preserving for family in families),
			regular=all(family.regular for family in families)
		)
		self.families = families

	def compute_atoms(self, t):
		atoms = [family.atoms_at(t[i:i + 1]) for i, family in enumerate(self.families)]
		mesh = np.meshgrid(*[a.nodes[:, 0] for a in atoms], indexing='ij')
		nodes = np.stack([m.reshape(-1) for m in mesh], axis=1)
		weights = reduce(np.kron, [a.weights for a in atoms])

		return nodes, weights



def _check_n(n):
	if int(n) != n or n < 1:
		raise InputError('process index n must be a positive integer, got %r' % (n,))

	return int(n)


def make_bernstein(n: int, domain: Domain = None):
	n = _check_n(n)
	domain = domain or Domain.from_bounds(X=[(0., 1.)], K=[(0., 1.)], K1=[(0.1, 0.9)])

	if domain.dim != 1 or not domain.is_bounded:
		raise ConfigurationError('Bernstein operators need a bounded interval; use make_tensor for boxes')

	return OperatorPair(BernsteinFamily(n, domain.X.lower[0], domain.X.upper[0]), domain)


def make_szasz(n: int, kmax_policy: float = 1e-14, domain: Domain = None):
	n = _check_n(n)
	domain = domain or Domain.from_bounds(X=[(0., np.inf)], K=[(0., 2.)], K1=[(0., 1.)])

	if domain.dim != 1 or domain.X.lower[0] < 0:
		raise ConfigurationError('Szász operators live on a subset of [0, inf)')

	return OperatorPair(SzaszFamily(n, tail=kmax_policy), domain)


def make_gauss_weierstrass(n: int, quad_points: int = 64, domain: Domain = None):
	n = _check_n(n)

	if quad_points < 16:
		raise InputError('Gauss-Weierstrass needs at least 16 quadrature points')

	domain = domain or Domain.from_bounds(X=[(-np.inf, np.inf)], K=[(-1., 1.)], K1=[(-0.5, 0.5)])

	if domain.dim != 1 or domain.shape != 'full':
		raise ConfigurationError('Gauss-Weierstrass operators live on the whole real line')

	return OperatorPair(GaussWeierstrassFamily(n, quad_points), domain)


def make_tensor(op_1d, m: int, domain: Domain = None):
	pairs = list(op_1d) if isinstance(op_1d, (list, tuple)) else [op_1d] * m

	if len(pairs) != m or any(pair.domain.dim != 1 for pair in pairs):
		raise ConfigurationError('make_tensor needs %d one-dimensional pairs' % m)

	if domain is None:
		def product(attr):
			boxes = [getattr(pair.domain, attr) for pair in pairs]
			return Box([b.lower[0] for b in boxes], [b.upper[0] for b in boxes])

		domain = Domain(
			product('X'),
			product('K'),
			product('K1'),
			grid_resolution=pairs[0].domain.grid_resolution
		)

	return OperatorPair(TensorFamily([pair.family for pair in pairs]), domain)
