import logging
import numpy as np
from dataclasses import dataclass, field

from ..interfaces import GrowthFunction
from ..errors import ConfigurationError, GrowthViolation
from .utils import Lattice


logger = logging.getLogger(__name__)


def quadratic_growth():
	return GrowthFunction(
		g=lambda u: 1. + np.sum(u ** 2, axis=1),
		grad_g=lambda u: 2. * u,
		label='1+|u|^2'
	)


def gaussian_growth():
	def g(u):
		return np.exp(np.sum(u ** 2, axis=1) / 2.)

	return GrowthFunction(
		g=g,
		grad_g=lambda u: u * g(u)[:, None],
		label='exp(|u|^2/2)'
	)


def numeric_gradient(g, step=1e-5):
	'''Central differences of a vectorised scalar map, used for user-supplied g.'''
	def grad(u):
		u = np.asarray(u, dtype=float)
		out = np.empty_like(u)

		for i in range(u.shape[1]):
			h = step * np.maximum(1., np.abs(u[:, i]))
			forward = u.copy()
			backward = u.copy()
			forward[:, i] += h
			backward[:, i] -= h
			out[:, i] = (g(forward) - g(backward)) / (2 * h)

		return out

	return grad


def pick_growth(name):
	if name in ('quadratic', '1+|u|^2'):
		return quadratic_growth()
	elif name in ('gaussian', 'exp(|u|^2/2)'):
		return gaussian_growth()
	else:
		raise ConfigurationError('growth function "%s" does not exist' % name)



@dataclass
class GrowthCheck:
	positive: bool
	min_value: float
	convex: bool
	midpoint_margin: float
	gradient_ok: bool
	gradient_error: float
	superlinear: bool
	ray_ratios: list = field(default_factory=list)

	@property
	def ok(self):
		return self.positive and self.convex and self.gradient_ok and self.superlinear



def validate_growth(g, domain, lattice=None, seed=0, pairs=1000, midpoint_tol=1e-10, gradient_tol=1e-6, raise_on_failure=True):
	'''
	Empirical check of the growth hypotheses: g strictly positive and strictly
	convex, grad_g consistent with g, and g(t)/|t| unbounded along every
	unbounded coordinate ray of X.
	'''
	from ..core import sampling_lattice

	lattice = lattice or sampling_lattice(domain, g)
	points = lattice.points()
	values = g.values(points)
	rng = np.random.default_rng(seed)

	min_value = float(np.min(values))
	positive = bool(min_value > 0)

	a = points[rng.integers(0, points.shape[0], pairs)]
	b = points[rng.integers(0, points.shape[0], pairs)]
	distinct = np.any(a != b, axis=1)
	a, b = a[distinct], b[distinct]
	ga, gb, gm = g.values(a), g.values(b), g.values((a + b) / 2)
	scale = np.maximum(1., np.abs(ga) + np.abs(gb))
	# strict: every chord midpoint lies above g by more than the tolerance
	margin = ((ga + gb) / 2 - gm) / scale
	worst = float(np.min(margin)) if margin.size else np.inf
	convex = bool(worst > midpoint_tol)

	K_points = Lattice.over(domain.K, min(domain.grid_resolution, _per_axis_budget(domain.dim))).points()
	analytic = g.gradient(K_points)
	numeric = numeric_gradient(g.values)(K_points)
	error = np.linalg.norm(analytic - numeric, axis=1) / np.maximum(1., np.linalg.norm(analytic, axis=1))
	gradient_error = float(np.max(error))
	gradient_ok = bool(gradient_error <= gradient_tol)

	superlinear, ray_ratios = _check_rays(g, domain, lattice)

	check = GrowthCheck(
		positive=positive,
		min_value=min_value,
		convex=convex,
		midpoint_margin=worst,
		gradient_ok=gradient_ok,
		gradient_error=gradient_error,
		superlinear=superlinear,
		ray_ratios=ray_ratios
	)

	logger.debug('growth check for %s: %s', g.label, check)

	if raise_on_failure and not check.ok:
		raise GrowthViolation('growth function %s fails its hypotheses: %s' % (g.label, _describe(check)))

	return check


def _per_axis_budget(dim):
	return max(3, int(round(20000 ** (1. / dim))))


def _check_rays(g, domain, lattice):
	X = domain.X
	origin = domain.K.center
	extent = max(4., float(np.max(np.abs(lattice.points() - origin))))
	ratios = []
	ok = True

	for i in range(domain.dim):
		for sign, bound in ((1., X.upper[i]), (-1., X.lower[i])):
			if np.isfinite(bound):
				continue

			direction = np.zeros(domain.dim)
			direction[i] = sign
			radii = extent * np.array([1., 2., 4.])
			rays = origin[None, :] + radii[:, None] * direction[None, :]
			ray = g.values(rays) / np.linalg.norm(rays, axis=1)
			ratios.append((i, sign, ray.tolist()))

			# an overflowing g counts as growing
			with np.errstate(invalid='ignore'):
				growing = (np.diff(ray) > 0) | np.isinf(ray[1:])

			if not np.all(growing):
				ok = False

	return ok, ratios


def _describe(check):
	failures = []

	if not check.positive:
		failures.append('not strictly positive (min %g)' % check.min_value)
	if not check.convex:
		failures.append('not strictly convex (midpoint margin %g)' % check.midpoint_margin)
	if not check.gradient_ok:
		failures.append('gradient disagrees with central differences by %g' % check.gradient_error)
	if not check.superlinear:
		failures.append('g(t)/|t| does not grow along an unbounded ray')

	return '; '.join(failures)
