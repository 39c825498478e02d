import numpy as np

from ...interfaces import OperatorPair, as_point
from .family import MeasureFamily


class DerivedFamily(MeasureFamily):
	def __init__(self, base, label, n=None, constant_preserving=False, regular=None):
		super().__init__(
			base.n if n is None else n,
			getattr(base, 'dim', 1),
			label,
			constant_preserving=constant_preserving,
			regular=base.regular if regular is None else regular,
			metadata=getattr(base, 'metadata', None)
		)
		self.base = base

	def compute_atoms(self, t):
		return self.base.atoms_at(t)

	def compute_l_atoms(self, t):
		return self.base.l_atoms_at(t)



class ScaledFamily(DerivedFamily):
	'''All weights multiplied by factor(n); L and S stay shared.'''

	def __init__(self, base, factor, label=None):
		self.factor = float(factor(base.n))
		super().__init__(
			base,
			label or 'scaled(%s)' % base.label,
			constant_preserving=base.constant_preserving and self.factor == 1.
		)

	def compute_atoms(self, t):
		nodes, weights = self.base.atoms_at(t)
		return nodes, weights * self.factor

	def compute_l_atoms(self, t):
		return self.atoms_at(t)



class FrozenFamily(DerivedFamily):
	def __init__(self, base, n):
		super().__init__(base, 'frozen(%s)' % base.label, n=n, constant_preserving=base.constant_preserving)



class PerturbedLFamily(DerivedFamily):
	'''L-atoms whose weights drift from the S-atoms by a relative amount.'''

	def __init__(self, base, amount):
		super().__init__(base, 'perturbed(%s)' % base.label, constant_preserving=False, regular=False)
		self.amount = float(amount)

	def compute_l_atoms(self, t):
		nodes, weights = self.base.atoms_at(t)
		signs = np.where(np.arange(weights.shape[0]) % 2 == 0, 1., -1.)
		return nodes, weights * (1. + self.amount * signs)



class NegativeAtomFamily(DerivedFamily):
	def __init__(self, base, node, weight):
		super().__init__(base, 'negative(%s)' % base.label, constant_preserving=False)
		self.node = as_point(node, self.dim)
		self.weight = float(weight)

	def compute_atoms(self, t):
		nodes, weights = self.base.atoms_at(t)
		return np.vstack([nodes, self.node[None, :]]), np.append(weights, self.weight)

	def compute_l_atoms(self, t):
		return self.atoms_at(t)



def scale_family(pair: OperatorPair, factor):
	factor = factor if callable(factor) else (lambda n, value=factor: value)
	return OperatorPair(ScaledFamily(pair.family, factor), pair.domain)


def freeze_family(pair: OperatorPair, n: int):
	return OperatorPair(FrozenFamily(pair.family, n), pair.domain)


def perturb_l_atoms(pair: OperatorPair, amount: float = 1e-3):
	return OperatorPair(PerturbedLFamily(pair.family, amount), pair.domain)


def inject_negative_atom(pair: OperatorPair, node, weight: float = -0.5):
	assert weight < 0, 'injected weight must be negative'
	return OperatorPair(NegativeAtomFamily(pair.family, node, weight), pair.domain)
