import itertools
import logging
import numpy as np
from dataclasses import dataclass
from scipy.optimize import brentq

from .interfaces import Box, Domain, GrowthFunction, ScalarFunction, VectorFunction, WeakNeighborhood, as_point, as_points
from .errors import ConfigurationError, EvaluationError, GrowthViolation, InputError
from .modules.utils import Lattice, overlap, SNAP


logger = logging.getLogger(__name__)

RADIUS_CAP = 50.
GROWTH_RATIO_LIMIT = 1e6


def as_vector_function(F):
	if isinstance(F, VectorFunction):
		return F
	if isinstance(F, ScalarFunction):
		return F.as_vector()

	raise InputError('expected a VectorFunction or ScalarFunction, got %r' % type(F).__name__)


def psi_sq(t, u):
	t = as_point(t)
	u = as_point(u)

	if t.shape != u.shape:
		raise InputError('dimension mismatch: %d vs %d' % (t.shape[0], u.shape[0]))

	return float(np.sum((u - t) ** 2))


def bregman_gap(g: GrowthFunction, t, u, domain: Domain = None):
	'''h(t,u) = g(u) - g(t) - <g'(t), u-t>, for t in K.'''
	t = as_point(t)
	u = as_point(u, t.shape[0])

	if domain is not None:
		domain.require_in_K(t)

	return float(bregman_gaps(g, t[None, :], u[None, :])[0, 0])


def bregman_gaps(g: GrowthFunction, T, U):
	# rows follow T, columns follow U
	T = as_points(T)
	U = as_points(U, T.shape[1])
	gT = g.values(T)
	gU = g.values(U)
	G = g.gradient(T)

	return gU[None, :] - gT[:, None] - G @ U.T + np.sum(G * T, axis=1)[:, None]


def sublevel_member(g: GrowthFunction, n, u):
	if not n > 0:
		raise InputError('sublevel index must be positive')

	return bool(g(u) <= n)



@dataclass
class ModulusProfile:
	'''Grid modulus of continuity as a step function of the radius.'''
	lengths: np.ndarray
	sups: np.ndarray
	resolution: int

	def __call__(self, delta):
		if not delta > 0:
			raise InputError('delta must be positive')

		index = np.searchsorted(self.lengths, delta * (1 + SNAP), side='right') - 1
		return float(self.sups[max(index, 0)])

	def upper(self, delta):
		if not delta > 0:
			raise InputError('delta must be positive')

		index = np.searchsorted(self.lengths, delta * (1 - SNAP), side='left')
		return float(self.sups[min(index, len(self.sups) - 1)])

	@property
	def radius(self):
		return float(self.lengths[-1])


def modulus_profile(F, lattice, radius, norm='euclidean'):
	F = as_vector_function(F)
	values = F.values(lattice.points()).reshape(lattice.shape + (F.codim,))
	lengths = [0.]
	sups = [0.]

	for offset, length in lattice.offsets(radius, norm=norm):
		a, b = overlap(lattice.shape, offset)
		diff = np.linalg.norm(values[a] - values[b], axis=-1)

		if diff.size:
			lengths.append(length)
			sups.append(float(np.max(diff)))

	order = np.argsort(lengths, kind='stable')

	return ModulusProfile(
		lengths=np.asarray(lengths)[order],
		sups=np.maximum.accumulate(np.asarray(sups)[order]),
		resolution=max(lattice.shape)
	)


def modulus_of_continuity(F: VectorFunction, K: Box, delta: float, resolution: int = 201, norm: str = 'euclidean'):
	'''
	Grid supremum of |F(u)-F(t)| over sampled pairs of K with |t-u| <= delta.
	Nondecreasing in delta since the admissible offsets only grow.
	'''
	if not delta > 0:
		raise InputError('delta must be positive')

	lattice = Lattice.over(K, resolution)

	if lattice.size == 0:
		raise ConfigurationError('empty sampling grid')

	return modulus_profile(F, lattice, delta, norm=norm)(delta)


def weak_modulus(F: VectorFunction, K: Box, nbhd: WeakNeighborhood, B_nu: Box, resolution: int = 201):
	'''
	Grid supremum of |F(t)-F(u)| over t in K, u in B_nu with u-t in the closed
	weak neighborhood {y : |<xi,y>| <= delta for xi in the functionals}.
	'''
	F = as_vector_function(F)

	if nbhd.dim != K.dim:
		raise InputError('functionals have dimension %d, domain has %d' % (nbhd.dim, K.dim))

	if not B_nu.contains_box(K):
		raise ConfigurationError('B_nu must contain K')

	anchor = Lattice.over(K, resolution)
	cover = Lattice.covering(anchor, B_nu)
	start = cover.index_of(anchor)
	values = F.values(cover.points()).reshape(cover.shape + (F.codim,))
	spacing = cover.spacing
	functionals = nbhd.functionals
	limits = _neighborhood_limits(functionals, nbhd.delta, spacing)
	best = 0.

	for offset in _all_offsets(cover.shape, limits):
		step = np.asarray(offset) * spacing

		if np.max(np.abs(functionals @ step)) > nbhd.delta * (1 + SNAP):
			continue

		t_block, u_block = [], []

		for s, n_K, n_C, d in zip(start, anchor.shape, cover.shape, offset):
			lo = max(s, -d)
			hi = min(s + n_K, n_C - d)
			t_block.append(slice(lo, max(lo, hi)))
			u_block.append(slice(lo + d, max(lo, hi) + d))

		diff = np.linalg.norm(values[tuple(t_block)] - values[tuple(u_block)], axis=-1)

		if diff.size:
			best = max(best, float(np.max(diff)))

	return best


def _neighborhood_limits(functionals, delta, spacing):
	# unbounded offsets unless the functionals span R^m
	if np.linalg.matrix_rank(functionals) < functionals.shape[1]:
		return None

	reach = np.linalg.norm(np.linalg.pinv(functionals), ord=np.inf) * delta
	return [int(np.floor(reach / h + SNAP)) + 1 if h > 0 else 0 for h in spacing]


def _all_offsets(shape, limits):
	ranges = []

	for i, n in enumerate(shape):
		r = n - 1 if limits is None else min(n - 1, limits[i])
		ranges.append(range(-r, r + 1))

	return itertools.product(*ranges)


def shrink_neighborhood(F: VectorFunction, K: Box, functionals, eps: float, B_nu: Box = None, resolution: int = 201, delta: float = 1., max_halvings: int = 64):
	'''
	Halves delta until the weak modulus of F over K drops to eps; returns the
	neighborhood and the modulus it achieves.
	'''
	if not eps > 0:
		raise InputError('eps must be positive')

	B_nu = B_nu or K

	for _ in range(max_halvings):
		nbhd = WeakNeighborhood(functionals, delta)
		value = weak_modulus(F, K, nbhd, B_nu, resolution=resolution)

		if value <= eps:
			return nbhd, value

		delta /= 2

	raise ConfigurationError('no neighborhood reaches eps=%g after %d halvings' % (eps, max_halvings))



def truncation_radius(domain: Domain, g: GrowthFunction = None):
	'''
	Sampling radius around the center of K for unbounded X: the extent of the
	sublevel set B_n with n = 10 * max_K g along coordinate rays, capped at 50.
	'''
	if domain.truncation_radius is not None:
		return float(domain.truncation_radius)

	if g is None:
		from .modules.growth import quadratic_growth
		g = quadratic_growth()

	center = domain.K.center
	K_points = Lattice.over(domain.K, min(domain.grid_resolution, 21)).points()
	level = 10. * float(np.max(g.values(K_points)))
	radius = 0.

	for i in range(domain.dim):
		for sign in (1., -1.):
			direction = np.zeros(domain.dim)
			direction[i] = sign

			def excess(r):
				return min(g(center + r * direction), 1e300) - level

			if excess(RADIUS_CAP) <= 0:
				return RADIUS_CAP

			radius = max(radius, brentq(excess, 0., RADIUS_CAP))

	return min(radius, RADIUS_CAP)


def truncation_box(domain: Domain, g: GrowthFunction = None):
	if domain.is_bounded:
		return domain.X

	radius = truncation_radius(domain, g)
	center = domain.K.center
	lower = np.maximum(domain.X.lower, np.minimum(center - radius, domain.K.lower))
	upper = np.minimum(domain.X.upper, np.maximum(center + radius, domain.K.upper))

	return Box(lower, upper)


def sampling_lattice(domain: Domain, g: GrowthFunction = None, resolution: int = None):
	anchor = Lattice.over(domain.K, resolution or domain.grid_resolution)
	return Lattice.covering(anchor, truncation_box(domain, g))


def growth_ratio(F: VectorFunction, g: GrowthFunction, points):
	F = as_vector_function(F)
	points = as_points(points)

	try:
		values = F.values(points)
	except EvaluationError as error:
		raise GrowthViolation('%s is not finite on the sampling grid' % F.label, witness=error.node, ratio=np.inf)

	ratio = np.linalg.norm(values, axis=1) / g.values(points)
	index = int(np.argmax(ratio))

	return float(ratio[index]), points[index]



class ModulusCache:
	'''
	Grid moduli of one function on one lattice, with the offset profile
	grown on demand. Bounds use the upper envelope so that radii below the
	grid spacing still see the nearest sampled distance.
	'''

	def __init__(self, F, lattice, norm='euclidean'):
		self.F = as_vector_function(F)
		self.lattice = lattice
		self.norm = norm
		self.reach = float(np.linalg.norm(lattice.spacing))
		self.radius = 0.
		self.profile = None

	@classmethod
	def over(cls, F, box, resolution, norm='euclidean'):
		return cls(F, Lattice.over(box, resolution), norm=norm)

	def ensure(self, delta):
		if self.profile is None or delta + self.reach > self.radius:
			self.radius = 2 * delta + self.reach
			self.profile = modulus_profile(self.F, self.lattice, self.radius, norm=self.norm)

		return self.profile

	def __call__(self, delta):
		return self.ensure(delta)(delta)

	def upper(self, delta):
		return self.ensure(delta).upper(delta)
