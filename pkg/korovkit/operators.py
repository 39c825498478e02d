import logging
import numpy as np

from .interfaces import CheckReport, GrowthFunction, OperatorPair, ScalarFunction, VectorFunction, as_point, as_points
from .errors import InputError
from .core import as_vector_function, bregman_gaps
from .modules.utils import Lattice
from .modules.families import make_bernstein, make_szasz, make_gauss_weierstrass, make_tensor
from .loader import load_family, save_family


logger = logging.getLogger(__name__)

CHECK_TOLERANCE = 1e-12


def apply_S(pair: OperatorPair, f: ScalarFunction, t):
	t = pair.domain.require_in_X(t)
	nodes, weights = pair.family.atoms_at(t)

	return float(weights @ f.values(nodes))


def apply_L(pair: OperatorPair, F: VectorFunction, t):
	t = pair.domain.require_in_X(t)
	F = as_vector_function(F)
	nodes, weights = pair.family.l_atoms_at(t)
	values = F.values(nodes)

	if weights.ndim == 1:
		return weights @ values

	if weights.shape[1] != F.codim:
		raise InputError('L-atoms carry %d weight components, %s has %d' % (weights.shape[1], F.label, F.codim))

	return np.sum(weights * values, axis=0)


def apply_S_many(pair, f, points):
	return np.array([apply_S(pair, f, t) for t in as_points(points, pair.domain.dim)])


def gamma_sq(pair: OperatorPair, t):
	'''γ_n²(t) = S_n(|· - t|²)(t).'''
	t = pair.domain.require_in_X(t)
	nodes, weights = pair.family.atoms_at(t)

	return float(weights @ np.sum((nodes - t) ** 2, axis=1))


def h_terms(pair, g, t):
	'''
	The four terms S(g)(t), -g(t)S(1)(t), -S(<g'(t),.>)(t), <g'(t),t>S(1)(t)
	whose sum is S(h(t,.))(t).
	'''
	nodes, weights = pair.family.atoms_at(t)
	grad = g.gradient(t[None, :])[0]
	s1 = float(np.sum(weights))

	return np.array([
		float(weights @ g.values(nodes)),
		-g(t) * s1,
		-float(weights @ (nodes @ grad)),
		float(grad @ t) * s1
	])


def apply_S_h(pair: OperatorPair, g: GrowthFunction, t, mode: str = 'direct'):
	'''S_n(h(t,.))(t) for t in K, summed over the atoms (direct) or via its expansion.'''
	t = pair.domain.require_in_K(t)

	if mode == 'direct':
		nodes, weights = pair.family.atoms_at(t)
		return float(weights @ bregman_gaps(g, t[None, :], nodes)[0])
	elif mode == 'expanded':
		return float(np.sum(h_terms(pair, g, t)))
	else:
		raise InputError('mode must be "direct" or "expanded", got %r' % (mode,))


def h_identity_gap(pair, g, t):
	t = pair.domain.require_in_K(t)
	direct = apply_S_h(pair, g, t, 'direct')
	terms = h_terms(pair, g, t)
	scale = max(float(np.sum(np.abs(terms))), np.finfo(float).tiny)

	return abs(direct - float(np.sum(terms))) / scale



def default_sample(domain, resolution=21):
	return Lattice.over(domain.K, min(resolution, domain.grid_resolution)).points()


def _sample(pair, sample):
	if sample is None:
		if getattr(pair.family, 'points', None) is not None:
			return pair.family.points

		return default_sample(pair.domain)

	return as_points(sample, pair.domain.dim)


def _report(name, pair, violations, sample, tolerance=CHECK_TOLERANCE):
	violations = np.asarray(violations, dtype=float)
	index = int(np.argmax(violations))

	report = CheckReport(
		name=name,
		label=pair.label,
		passed=bool(violations[index] <= tolerance),
		violation=float(max(violations[index], 0.)),
		witness=sample[index],
		tolerance=tolerance
	)

	logger.debug(report.describe())
	return report


def negative_atoms(pair, t):
	found = []

	for nodes, weights in (pair.family.atoms_at(t), pair.family.l_atoms_at(t)):
		if weights.ndim != 1:
			continue

		for index in np.flatnonzero(weights < 0):
			atom = (t, nodes[index], float(weights[index]))

			if not any(np.array_equal(atom[1], other[1]) and atom[2] == other[2] for other in found):
				found.append(atom)

	return found


def mismatched_atoms(pair, t, tolerance=CHECK_TOLERANCE):
	s_nodes, s_weights = pair.family.atoms_at(t)
	nodes, weights = pair.family.l_atoms_at(t)
	found = []

	for node, weight in zip(nodes, weights):
		same = np.flatnonzero(np.all(s_nodes == node, axis=1))
		expected = s_weights[same[0]] if same.size else 0.
		weight = np.ravel(weight)
		deviation = np.abs(weight - expected)

		if np.max(deviation) > tolerance:
			found.append((t, node, float(weight[np.argmax(deviation)])))

	return found


def heaviest_atom(pair, t):
	nodes, weights = pair.family.l_atoms_at(t)
	weights = weights.reshape(weights.shape[0], -1)
	index = int(np.argmax(np.max(np.abs(weights), axis=1)))

	return [(t, nodes[index], float(weights[index, 0]))]


def check_positivity(pair: OperatorPair, sample=None):
	sample = _sample(pair, sample)
	atoms = []
	worst = 0.
	witness = sample[0]

	for t in sample:
		t = pair.domain.require_in_X(t)

		for atom in negative_atoms(pair, t):
			atoms.append(atom)

			if -atom[2] > worst:
				worst = -atom[2]
				witness = t

	report = CheckReport(
		name='positivity',
		label=pair.label,
		passed=not atoms,
		violation=worst,
		witness=witness,
		tolerance=0.,
		atoms=atoms
	)

	logger.debug(report.describe())
	return report


def check_domination(pair: OperatorPair, F: VectorFunction, sample=None):
	'''max over the sample of |L(F)(t)| - S(|F|)(t); PASS iff <= 1e-12.'''
	F = as_vector_function(F)
	sample = _sample(pair, sample)
	norm = F.norm()
	violations = [np.linalg.norm(apply_L(pair, F, t)) - apply_S(pair, norm, t) for t in sample]

	report = _report('domination', pair, violations, sample)

	if not report.passed:
		report.atoms = negative_atoms(pair, report.witness)

	return report


def check_regularity(pair: OperatorPair, f: ScalarFunction, x, sample=None):
	x = np.atleast_1d(np.asarray(x, dtype=float))
	sample = _sample(pair, sample)
	F = f.tensor(x)
	violations = [np.linalg.norm(apply_L(pair, F, t) - apply_S(pair, f, t) * x) for t in sample]

	report = _report('regularity', pair, violations, sample)

	if not report.passed:
		report.atoms = mismatched_atoms(pair, report.witness)

	return report


def check_constants(pair: OperatorPair, c, sample=None):
	'''max over the sample of |L(c)(t) - c|; equivalent to S(1) = 1 on regular pairs.'''
	c = np.atleast_1d(np.asarray(c, dtype=float))
	sample = _sample(pair, sample)
	C = VectorFunction.constant(c)
	violations = [np.linalg.norm(apply_L(pair, C, t) - c) for t in sample]

	report = _report('constants', pair, violations, sample)

	if not report.passed:
		t = report.witness
		# a pure mass defect has no single culprit; the heaviest atom stands in
		report.atoms = negative_atoms(pair, t) + mismatched_atoms(pair, t) or heaviest_atom(pair, t)

	return report


def constant_defect(pair, t):
	'''|S_n(1)(t) - 1|, the factor bounding |L_n(c)(t) - c| / |c| for regular pairs.'''
	return abs(apply_S(pair, ScalarFunction.constant(1.), t) - 1.)


def preserves_linear(pair, t, tol=1e-12):
	t = as_point(t, pair.domain.dim)

	if constant_defect(pair, t) > tol:
		return False

	for i in range(pair.domain.dim):
		if abs(apply_S(pair, ScalarFunction.projection(i), t) - t[i]) > tol:
			return False

	return True
