from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional
import numpy as np

from .errors import DomainError, EvaluationError, InputError


def as_points(points, dim=None):
	points = np.asarray(points, dtype=float)

	if points.ndim == 0:
		points = points.reshape(1, 1)
	elif points.ndim == 1:
		points = points.reshape(1, -1) if dim is None or points.shape[0] == dim else points.reshape(-1, 1)

	if dim is not None and points.shape[1] != dim:
		raise InputError('expected points of dimension %d, got %d' % (dim, points.shape[1]))

	return points


def as_point(t, dim=None):
	t = np.atleast_1d(np.asarray(t, dtype=float))

	if t.ndim != 1:
		raise InputError('expected a single point, got shape %s' % (t.shape,))

	if dim is not None and t.shape[0] != dim:
		raise InputError('expected a point of dimension %d, got %d' % (dim, t.shape[0]))

	return t



@dataclass(eq=False)
class Box:
	lower: np.ndarray
	upper: np.ndarray

	def __post_init__(self):
		self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
		self.upper = np.atleast_1d(np.asarray(self.upper, dtype=float))

		if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
			raise DomainError('box bounds must be two vectors of equal length')

		if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
			raise DomainError('box bounds must not be NaN')

		if np.any(self.lower > self.upper):
			raise DomainError('box lower bound exceeds upper bound: %s > %s' % (self.lower, self.upper))

	@classmethod
	def from_bounds(cls, bounds):
		bounds = [(float(lo), float(hi)) for lo, hi in bounds]
		return cls([lo for lo, _ in bounds], [hi for _, hi in bounds])

	@property
	def dim(self):
		return self.lower.shape[0]

	@property
	def width(self):
		return self.upper - self.lower

	@property
	def center(self):
		return np.where(
			np.isfinite(self.lower) & np.isfinite(self.upper),
			(self.lower + self.upper) / 2,
			np.where(np.isfinite(self.lower), self.lower, np.where(np.isfinite(self.upper), self.upper, 0.))
		)

	@property
	def is_bounded(self):
		return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))

	def contains(self, points, tol=1e-12):
		points = as_points(points, self.dim)
		return np.all((points >= self.lower - tol) & (points <= self.upper + tol), axis=1)

	def contains_box(self, other, tol=1e-12):
		return bool(np.all(other.lower >= self.lower - tol) and np.all(other.upper <= self.upper + tol))

	def same_as(self, other):
		return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

	def bounds(self):
		return [(float(lo), float(hi)) for lo, hi in zip(self.lower, self.upper)]



@dataclass(eq=False)
class Domain:
	'''
	A convex box-shaped subset X of R^m with a compact sub-box K and an inner
	closed sub-box K1 of the interior of K.

	In dimension one K1 may share an endpoint with K when that endpoint is a
	finite boundary point of X, e.g. X=[a,inf), K=[a,b], K1=[a,b1] with b1<b.
	'''
	X: Box
	K: Box
	K1: Box
	grid_resolution: int = 201
	truncation_radius: Optional[float] = None

	def __post_init__(self):
		if not (self.X.dim == self.K.dim == self.K1.dim):
			raise DomainError('X, K and K1 must share the same dimension')

		if self.grid_resolution < 2:
			raise DomainError('grid_resolution must be at least 2')

		if not self.K.is_bounded:
			raise DomainError('K must be bounded')

		if not self.X.contains_box(self.K, tol=0):
			raise DomainError('K must be contained in X')

		if self.truncation_radius is not None and self.truncation_radius <= 0:
			raise DomainError('truncation_radius must be positive')

		self.check_inner_box()


	def check_inner_box(self):
		K, K1, X = self.K, self.K1, self.X
		touching = 0

		for i in range(self.dim):
			if K.width[i] == 0:
				if K1.lower[i] != K.lower[i] or K1.upper[i] != K.upper[i]:
					raise DomainError('K1 must coincide with K on degenerate axis %d' % i)
				continue

			for side, inner, outer, boundary in (
				('lower', K1.lower[i], K.lower[i], X.lower[i]),
				('upper', -K1.upper[i], -K.upper[i], -X.upper[i])
			):
				if inner > outer:
					continue

				if inner == outer and self.dim == 1 and outer == boundary and np.isfinite(boundary):
					touching += 1
					continue

				raise DomainError('K1 must lie in the interior of K (%s bound on axis %d)' % (side, i))

		if touching > 1:
			raise DomainError('K1 may share at most one endpoint with K')

		if np.any(K1.lower > K1.upper):
			raise DomainError('K1 is empty')


	@classmethod
	def from_bounds(cls, X, K, K1, **kwargs):
		return cls(Box.from_bounds(X), Box.from_bounds(K), Box.from_bounds(K1), **kwargs)

	@property
	def dim(self):
		return self.X.dim

	@property
	def shape(self):
		if self.X.is_bounded:
			return 'box'
		if np.all(np.isinf(self.X.lower)) and np.all(np.isinf(self.X.upper)):
			return 'full'
		return 'halfline'

	@property
	def is_bounded(self):
		return self.X.is_bounded

	@property
	def bounded_mode(self):
		return self.X.same_as(self.K)

	def require_in(self, box, t, name):
		t = as_point(t, self.dim)

		if not box.contains(t)[0]:
			raise DomainError('point %s lies outside %s' % (t.tolist(), name))

		return t

	def require_in_X(self, t):
		return self.require_in(self.X, t, 'X')

	def require_in_K(self, t):
		return self.require_in(self.K, t, 'K')

	def require_in_K1(self, t):
		return self.require_in(self.K1, t, 'K1')

	def outside_interior_of_K(self, points):
		'''Mask of points not in the interior of K relative to X.'''
		points = as_points(points, self.dim)
		K, X = self.K, self.X
		low = (points <= K.lower) & (K.lower > X.lower)
		high = (points >= K.upper) & (K.upper < X.upper)
		return np.any(low | high, axis=1)



def _check_finite(values, points, label):
	bad = ~np.all(np.isfinite(values.reshape(values.shape[0], -1)), axis=1)

	if np.any(bad):
		node = points[np.argmax(bad)]
		raise EvaluationError('%s is undefined at node %s' % (label or 'function', node.tolist()), node=node)


@dataclass(eq=False)
class ScalarFunction:
	fn: Callable
	label: str = ''

	def values(self, points):
		points = as_points(points)

		with np.errstate(all='ignore'):
			out = np.asarray(self.fn(points), dtype=float)

		out = np.broadcast_to(out.reshape(-1) if out.ndim else out, (points.shape[0],)).copy()
		_check_finite(out, points, self.label)
		return out

	def __call__(self, point):
		return float(self.values(as_point(point).reshape(1, -1))[0])

	@classmethod
	def constant(cls, value):
		value = float(value)
		return cls(lambda u: np.full(u.shape[0], value), label=repr(value))

	@classmethod
	def projection(cls, i):
		return cls(lambda u: u[:, i], label='pr%d' % (i + 1))

	def tensor(self, x):
		'''f⊗x as a vector function.'''
		x = np.atleast_1d(np.asarray(x, dtype=float))
		f = self
		return VectorFunction(x.shape[0], lambda u: f.values(u)[:, None] * x[None, :], label='%s⊗%s' % (self.label, x.tolist()))

	def as_vector(self):
		f = self
		return VectorFunction(1, lambda u: f.values(u)[:, None], label=self.label)



@dataclass(eq=False)
class VectorFunction:
	codim: int
	fn: Callable
	label: str = ''

	def __post_init__(self):
		if self.codim < 1:
			raise InputError('codim must be a positive integer')

	def values(self, points):
		points = as_points(points)

		with np.errstate(all='ignore'):
			out = np.asarray(self.fn(points), dtype=float)

		if out.ndim <= 1:
			out = np.broadcast_to(out.reshape(-1, 1) if out.ndim else out, (points.shape[0], self.codim))

		out = np.broadcast_to(out, (points.shape[0], self.codim)).copy()
		_check_finite(out, points, self.label)
		return out

	def __call__(self, point):
		return self.values(as_point(point).reshape(1, -1))[0]

	@classmethod
	def constant(cls, c):
		c = np.atleast_1d(np.asarray(c, dtype=float))
		return cls(c.shape[0], lambda u: np.broadcast_to(c, (u.shape[0], c.shape[0])), label='const%s' % c.tolist())

	def norm(self):
		'''The scalar function ‖F‖.'''
		F = self
		return ScalarFunction(lambda u: np.linalg.norm(F.values(u), axis=1), label='|%s|' % self.label)

	def component(self, j):
		F = self
		return ScalarFunction(lambda u: F.values(u)[:, j], label='%s[%d]' % (self.label, j))

	def scaled(self, alpha):
		F = self
		return VectorFunction(self.codim, lambda u: alpha * F.values(u), label='%r*%s' % (alpha, self.label))



@dataclass(eq=False)
class GrowthFunction:
	g: Callable
	grad_g: Callable
	label: str = ''

	def values(self, points):
		points = as_points(points)

		with np.errstate(over='ignore'):
			out = np.asarray(self.g(points), dtype=float).reshape(-1)

		return np.broadcast_to(out, (points.shape[0],)).copy()

	def gradient(self, points):
		points = as_points(points)
		return np.asarray(self.grad_g(points), dtype=float).reshape(points.shape)

	def __call__(self, point):
		return float(self.values(as_point(point).reshape(1, -1))[0])

	def as_scalar(self):
		return ScalarFunction(self.values, label=self.label or 'g')



@dataclass(eq=False)
class WeakNeighborhood:
	functionals: np.ndarray
	delta: float

	def __post_init__(self):
		self.functionals = np.atleast_2d(np.asarray(self.functionals, dtype=float))

		if self.functionals.size == 0:
			raise InputError('a weak neighborhood needs at least one functional')

		if not self.delta > 0:
			raise InputError('delta must be positive')

	@classmethod
	def coordinate(cls, dim, delta):
		return cls(np.eye(dim), delta)

	@property
	def dim(self):
		return self.functionals.shape[1]



class Atoms(NamedTuple):
	nodes: np.ndarray
	weights: np.ndarray



class FamilyInterface:
	n = None
	label = ''
	constant_preserving = False
	regular = True

	def atoms_at(self, t):
		raise NotImplementedError

	def l_atoms_at(self, t):
		return self.atoms_at(t)



@dataclass(eq=False)
class OperatorPair:
	family: FamilyInterface
	domain: Domain

	@property
	def n(self):
		return self.family.n

	@property
	def label(self):
		return self.family.label



@dataclass
class BoundReport:
	label: str
	t: Optional[np.ndarray]
	n: int
	form: str
	bound: float
	measured: float
	const_defect: float
	omega: float = 0.
	delta: Optional[float] = None
	s1: float = 1.
	gamma_sq: float = 0.
	M: Optional[float] = None
	snh: Optional[float] = None
	spread: Optional[float] = None
	valid: bool = field(init=False)

	def __post_init__(self):
		self.valid = bool(self.measured <= self.bound + 1e-9)

	def reconstruct(self):
		if self.form == 'domination':
			return self.const_defect + self.spread

		if self.form in ('constant_preserving', 'linear_preserving'):
			return self.const_defect + 2 * self.omega + self.M * self.snh

		if self.form == 'neighborhood':
			return self.const_defect + self.s1 * self.omega + self.M * self.snh

		bound = self.const_defect

		if self.delta is not None:
			bound += self.omega * (self.s1 + self.gamma_sq / self.delta ** 2)

		if self.form == 'growth':
			bound += self.M * self.snh

		return bound



@dataclass
class GrowthConstant:
	M: float
	nu: float
	far_ratio_max: float
	mid_ratio_max: float
	growth_ratio_max: float = 0.
	psi_ratio_max: float = 0.
	grid_meta: dict = field(default_factory=dict)



@dataclass
class CheckReport:
	name: str
	label: str
	passed: bool
	violation: float
	witness: Optional[np.ndarray] = None
	tolerance: float = 1e-12
	atoms: list = field(default_factory=list)

	def describe(self):
		text = '%s %s: %s (max violation %.3e' % (self.name, self.label, 'PASS' if self.passed else 'FAIL', self.violation)

		if self.witness is not None:
			text += ' at t=%s' % np.asarray(self.witness).tolist()

		text += ')'

		for t, node, weight in self.atoms:
			text += '; atom at t=%s node=%s weight=%r' % (np.asarray(t).tolist(), np.asarray(node).tolist(), weight)

		return text
