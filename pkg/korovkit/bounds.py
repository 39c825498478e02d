import logging
import numpy as np

from .interfaces import Box, BoundReport, Domain, GrowthConstant, GrowthFunction, OperatorPair, ScalarFunction, VectorFunction, WeakNeighborhood, as_points
from .errors import GrowthViolation, InputError, ModeError, TruncationError
from .core import GROWTH_RATIO_LIMIT, ModulusCache, as_vector_function, bregman_gaps, growth_ratio, sampling_lattice, truncation_box, weak_modulus
from .operators import apply_L, apply_S, apply_S_h, gamma_sq, preserves_linear
from .modules.utils import Lattice, subsample


logger = logging.getLogger(__name__)

AUTO = 'auto'
TIE_TOLERANCE = 1e-12
PAIR_BUDGET = 2e7
CHUNK = 4e6

# most specialized first
FORM_PREFERENCE = ('linear_preserving', 'constant_preserving', 'growth')


def measured_error(pair: OperatorPair, F: VectorFunction, points):
	F = as_vector_function(F)
	points = as_points(points, pair.domain.dim)
	targets = F.values(points)
	errors = np.array([np.linalg.norm(apply_L(pair, F, t) - target) for t, target in zip(points, targets)])

	return errors, float(np.max(errors)) if errors.size else 0.


def constant_defect(pair, F, t):
	value = F(t)
	return float(np.linalg.norm(apply_L(pair, VectorFunction.constant(value), t) - value))


def _measured(pair, F, t):
	return float(np.linalg.norm(apply_L(pair, F, t) - F(t)))


def _resolve_delta(delta, gsq):
	if delta is None or delta == AUTO:
		return np.sqrt(max(gsq, 0.))

	delta = float(delta)

	if not delta > 0:
		raise InputError('delta must be positive or "auto", got %r' % delta)

	return delta


def _shisha_mond_terms(omega, delta, s1, gsq):
	assert delta >= 0, 'delta must be nonnegative, got %r' % delta

	if delta == 0:
		return 0., 0., None

	value = omega.upper(delta)
	return value * (s1 + gsq / delta ** 2), value, delta


def shisha_mond_bound(pair: OperatorPair, F: VectorFunction, t, delta=AUTO, resolution=None, omega=None):
	'''
	Pointwise estimate for uniformly continuous F on a compact X (X = K):
	const_defect + ω(F,δ)[S_n(1)(t) + δ⁻²γ_n²(t)], with δ = γ_n(t) under AUTO.
	'''
	domain = pair.domain

	if not domain.bounded_mode:
		raise ModeError('shisha_mond_bound needs X = K; use growth_bound on unbounded domains')

	F = as_vector_function(F)
	t = domain.require_in_X(t)
	omega = omega or ModulusCache.over(F, domain.K, resolution or domain.grid_resolution)
	gsq = gamma_sq(pair, t)
	s1 = apply_S(pair, ScalarFunction.constant(1.), t)
	cd = constant_defect(pair, F, t)
	term, value, delta = _shisha_mond_terms(omega, _resolve_delta(delta, gsq), s1, gsq)

	return BoundReport(
		label=pair.label,
		t=t,
		n=pair.n,
		form='shisha_mond',
		bound=cd + term,
		measured=_measured(pair, F, t),
		const_defect=cd,
		omega=value,
		delta=delta,
		s1=s1,
		gamma_sq=gsq
	)


def uniform_bound(pair: OperatorPair, F: VectorFunction, K=None, resolution=None):
	'''
	|L_n(F) - F|_K <= sup const_defect + ω(F,|γ_n|_K)[|S_n(1)|_K + 1], with ω taken
	over the (truncated) sampling lattice of X.
	'''
	domain = pair.domain
	F = as_vector_function(F)
	K = K or domain.K
	resolution = resolution or domain.grid_resolution
	points = Lattice.over(K, resolution).points()
	one = ScalarFunction.constant(1.)

	gsq = max(gamma_sq(pair, t) for t in points)
	s1 = max(apply_S(pair, one, t) for t in points)
	cd = max(constant_defect(pair, F, t) for t in points)
	_, measured = measured_error(pair, F, points)

	omega = ModulusCache(F, sampling_lattice(domain, resolution=resolution))
	term, value, delta = _shisha_mond_terms(omega, np.sqrt(gsq), s1, gsq)

	return BoundReport(
		label=pair.label,
		t=None,
		n=pair.n,
		form='uniform',
		bound=cd + term,
		measured=measured,
		const_defect=cd,
		omega=value,
		delta=delta,
		s1=s1,
		gamma_sq=gsq
	)


def domination_bound(pair: OperatorPair, F: VectorFunction, t):
	F = as_vector_function(F)
	t = pair.domain.require_in_X(t)
	center = F(t)
	spread = apply_S(pair, ScalarFunction(lambda u: np.linalg.norm(F.values(u) - center, axis=1), label='|F-F(t)|'), t)
	cd = constant_defect(pair, F, t)

	return BoundReport(
		label=pair.label,
		t=t,
		n=pair.n,
		form='domination',
		bound=cd + spread,
		measured=_measured(pair, F, t),
		const_defect=cd,
		s1=apply_S(pair, ScalarFunction.constant(1.), t),
		spread=spread
	)



def _ratio_max(F_T, F_U, T, U, g, mask=None):
	'''max |F(t)-F(u)|/h(t,u) over rows of T and U, chunked, skipping pairs with h <= 0 or masked out.'''
	best = 0.

	if T.shape[0] == 0 or U.shape[0] == 0:
		return best

	rows = max(1, int(CHUNK // U.shape[0]))

	for start in range(0, T.shape[0], rows):
		stop = start + rows
		h = bregman_gaps(g, T[start:stop], U)
		diff = np.linalg.norm(F_T[start:stop, None, :] - F_U[None, :, :], axis=-1)
		valid = h > 0

		if mask is not None:
			valid &= mask(T[start:stop], U)

		if np.any(valid):
			best = max(best, float(np.max(diff[valid] / h[valid])))

	return best


def _separates(g, T, U, gU, eps):
	rows = max(1, int(CHUNK // U.shape[0]))

	for start in range(0, T.shape[0], rows):
		if not np.all(bregman_gaps(g, T[start:start + rows], U) >= (1 - eps) * gU[None, :]):
			return False

	return True


def _select_nu(g, domain, T, U, gU, eps, nu_policy):
	if nu_policy not in (None, 'doubling'):
		return float(nu_policy), [float(nu_policy)]

	K_points = Lattice.over(domain.K, min(domain.grid_resolution, 21)).points()
	nu = float(np.max(g.values(K_points)))
	tried = []

	while True:
		tried.append(nu)
		far = (gU > nu) & np.isfinite(gU)

		if not np.any(far):
			if domain.is_bounded:
				return nu, tried

			raise TruncationError(
				'no sublevel index up to %g separates the far region on the sampling grid; '
				'increase truncation_radius' % nu
			)

		if _separates(g, T, U[far], gU[far], eps):
			return nu, tried

		nu *= 2


def _growth_constant(F, g, domain, T, resolution, eps, nu_policy, budget, region):
	F = as_vector_function(F)
	lattice = sampling_lattice(domain, g, resolution)
	points = lattice.points()
	ratio, witness = growth_ratio(F, g, points)

	if ratio > GROWTH_RATIO_LIMIT:
		raise GrowthViolation(
			'|%s|/g reaches %.3g at %s on the sampling grid' % (F.label, ratio, witness.tolist()),
			witness=witness,
			ratio=ratio
		)

	T, t_stride = subsample(T, min(T.shape[0], 2000))
	U, u_stride = subsample(points, max(1, int(budget // T.shape[0])))
	gU = g.values(U)
	nu, tried = _select_nu(g, domain, T, U, gU, eps, nu_policy)
	F_T = F.values(T)
	F_U = F.values(U)
	far = gU > nu

	far_ratio = _ratio_max(F_T, F_U[far], T, U[far], g)
	mid_ratio = region(F_T, F_U[~far], T, U[~far])

	center = domain.K.center
	g_points = g.values(points)
	psi_ratio = float(np.max(np.sum((points - center) ** 2, axis=1) / g_points))
	near = points[g_points <= nu]
	near = np.vstack([near, domain.K.lower[None, :], domain.K.upper[None, :]])

	constant = GrowthConstant(
		M=max(far_ratio, mid_ratio),
		nu=nu,
		far_ratio_max=far_ratio,
		mid_ratio_max=mid_ratio,
		growth_ratio_max=ratio,
		psi_ratio_max=psi_ratio,
		grid_meta={
			'resolution': resolution or domain.grid_resolution,
			'lattice_shape': lattice.shape,
			'truncation_box': truncation_box(domain, g).bounds(),
			'nu_schedule': tried,
			'eps': eps,
			't_stride': t_stride,
			'u_stride': u_stride,
			'B_nu': Box(near.min(axis=0), near.max(axis=0)).bounds()
		}
	)

	logger.debug('growth constant for %s: %s', F.label, constant)
	return constant


def estimate_M(F: VectorFunction, g: GrowthFunction, domain: Domain, nu_policy=None, resolution=None, eps=0.5, budget=PAIR_BUDGET):
	'''
	Grid estimate of M with |F(t)-F(u)| <= M h(t,u) for t in K1 and u either
	outside B_ν or in B_ν but outside the interior of K.
	'''
	T = Lattice.over(domain.K1, resolution or domain.grid_resolution).points()

	def region(F_T, F_U, T, U):
		outside = domain.outside_interior_of_K(U)
		return _ratio_max(F_T, F_U[outside], T, U[outside], g)

	return _growth_constant(F, g, domain, T, resolution, eps, nu_policy, budget, region)


def estimate_neighborhood_M(F: VectorFunction, g: GrowthFunction, domain: Domain, nbhd: WeakNeighborhood, nu_policy=None, resolution=None, eps=0.5, budget=PAIR_BUDGET):
	T = Lattice.over(domain.K, resolution or domain.grid_resolution).points()
	functionals = nbhd.functionals
	limit = nbhd.delta

	def outside(T, U):
		steps = U[None, :, :] - T[:, None, :]
		return np.max(np.abs(steps @ functionals.T), axis=-1) >= limit

	def region(F_T, F_U, T, U):
		return _ratio_max(F_T, F_U, T, U, g, mask=outside)

	return _growth_constant(F, g, domain, T, resolution, eps, nu_policy, budget, region)



def _check_psi(M):
	if M.psi_ratio_max > GROWTH_RATIO_LIMIT:
		raise GrowthViolation('ψ_t² is not dominated by g on the sampling grid (ratio %.3g)' % M.psi_ratio_max, ratio=M.psi_ratio_max)


def growth_bound_forms(pair: OperatorPair, F: VectorFunction, g: GrowthFunction, t, delta=AUTO, M=None, resolution=None, omega=None):
	'''
	Every applicable growth-controlled estimate at t in K1: the general one,
	and its specializations for constant- and linear-preserving families.
	'''
	domain = pair.domain
	F = as_vector_function(F)
	t = domain.require_in_K1(t)
	M = M or estimate_M(F, g, domain, resolution=resolution)
	_check_psi(M)

	omega = omega or ModulusCache.over(F, domain.K, resolution or domain.grid_resolution)
	gsq = gamma_sq(pair, t)
	s1 = apply_S(pair, ScalarFunction.constant(1.), t)
	cd = constant_defect(pair, F, t)
	measured = _measured(pair, F, t)
	snh = apply_S_h(pair, g, t, mode='direct')

	def report(form, bound, value, used_delta, snh=snh):
		return BoundReport(
			label=pair.label,
			t=t,
			n=pair.n,
			form=form,
			bound=bound,
			measured=measured,
			const_defect=cd,
			omega=value,
			delta=used_delta,
			s1=s1,
			gamma_sq=gsq,
			M=M.M,
			snh=snh
		)

	term, value, used_delta = _shisha_mond_terms(omega, _resolve_delta(delta, gsq), s1, gsq)
	forms = [report('growth', cd + term + M.M * snh, value, used_delta)]

	if pair.family.constant_preserving and abs(s1 - 1.) <= TIE_TOLERANCE:
		gamma = np.sqrt(max(gsq, 0.))
		value = omega.upper(gamma) if gamma > 0 else 0.
		used_delta = gamma if gamma > 0 else None
		forms.append(report('constant_preserving', cd + 2 * value + M.M * snh, value, used_delta))

		if preserves_linear(pair, t, TIE_TOLERANCE):
			linear_snh = apply_S(pair, g.as_scalar(), t) - g(t)
			forms.append(report('linear_preserving', cd + 2 * value + M.M * linear_snh, value, used_delta, snh=linear_snh))

	return forms


def growth_bound(pair: OperatorPair, F: VectorFunction, g: GrowthFunction, t, delta=AUTO, M=None, resolution=None, omega=None):
	'''The tightest of growth_bound_forms; ties go to the most specialized form.'''
	forms = growth_bound_forms(pair, F, g, t, delta=delta, M=M, resolution=resolution, omega=omega)
	lowest = min(report.bound for report in forms)
	ties = [report for report in forms if report.bound <= lowest + TIE_TOLERANCE]

	return min(ties, key=lambda report: FORM_PREFERENCE.index(report.form))


def neighborhood_bound(pair: OperatorPair, F: VectorFunction, g: GrowthFunction, t, nbhd: WeakNeighborhood, M=None, B_nu=None, resolution=None):
	'''
	Weak-neighborhood estimate for t in K:
	const_defect + S_n(1)(t) ω(F,K,I_{ℓ,δ}) + M S_n(h(t,.))(t).
	'''
	domain = pair.domain
	F = as_vector_function(F)
	t = domain.require_in_K(t)
	M = M or estimate_neighborhood_M(F, g, domain, nbhd, resolution=resolution)
	B_nu = B_nu or Box.from_bounds(M.grid_meta['B_nu'])
	value = weak_modulus(F, domain.K, nbhd, B_nu, resolution=resolution or domain.grid_resolution)
	s1 = apply_S(pair, ScalarFunction.constant(1.), t)
	cd = constant_defect(pair, F, t)
	snh = apply_S_h(pair, g, t, mode='direct')

	return BoundReport(
		label=pair.label,
		t=t,
		n=pair.n,
		form='neighborhood',
		bound=cd + s1 * value + M.M * snh,
		measured=_measured(pair, F, t),
		const_defect=cd,
		omega=value,
		delta=nbhd.delta,
		s1=s1,
		gamma_sq=gamma_sq(pair, t),
		M=M.M,
		snh=snh
	)
