import threading
import numpy as np
from collections import OrderedDict

from ...interfaces import Atoms, FamilyInterface, as_point


def freeze_atoms(nodes, weights):
	nodes = np.array(nodes, dtype=float)
	weights = np.array(weights, dtype=float)
	nodes.setflags(write=False)
	weights.setflags(write=False)

	return Atoms(nodes, weights)



class MeasureFamily(FamilyInterface):
	'''
	S_n and its vector companion L_n given by finitely many atoms per
	evaluation point. Atoms are memoised per point, keeping the most recently
	used max_cached points; the memo is guarded so concurrent queries for the
	same point see the same atoms.
	'''

	max_cached = 1024

	def __init__(self, n, dim, label, constant_preserving=False, regular=True, metadata=None):
		self.n = n
		self.dim = dim
		self.label = label
		self.constant_preserving = constant_preserving
		self.regular = regular
		self.metadata = dict(metadata or {})
		self._atoms = OrderedDict()
		self._l_atoms = OrderedDict()
		self._lock = threading.Lock()


	def atoms_at(self, t):
		return self._memo(self._atoms, self.compute_atoms, t)


	def l_atoms_at(self, t):
		return self._memo(self._l_atoms, self.compute_l_atoms, t)


	def compute_atoms(self, t):
		raise NotImplementedError


	def compute_l_atoms(self, t):
		return self.atoms_at(t)


	def record(self, key, value, reduce=max):
		with self._lock:
			self.metadata[key] = reduce(self.metadata[key], value) if key in self.metadata else value


	def clear_cache(self):
		with self._lock:
			self._atoms.clear()
			self._l_atoms.clear()


	def _memo(self, cache, compute, t):
		t = as_point(t, self.dim)
		key = tuple(t.tolist())

		with self._lock:
			atoms = cache.get(key)

			if atoms is not None:
				cache.move_to_end(key)

		if atoms is None:
			atoms = compute(t)

			if not isinstance(atoms, Atoms):
				nodes, weights = atoms
				atoms = freeze_atoms(np.asarray(nodes, dtype=float).reshape(-1, self.dim), weights)

			with self._lock:
				atoms = cache.setdefault(key, atoms)

				while len(cache) > self.max_cached:
					cache.popitem(last=False)

		return atoms


	def __repr__(self):
		return '<%s %s n=%s>' % (type(self).__name__, self.label, self.n)
