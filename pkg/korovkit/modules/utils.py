import itertools
import numpy as np
from dataclasses import dataclass

from ..errors import ConfigurationError


# grid coordinates are compared with this slack, in units of the spacing
SNAP = 1e-9


@dataclass(eq=False)
class Lattice:
	'''A rectangular grid given by one coordinate array per axis.'''
	axes: tuple

	@classmethod
	def over(cls, box, resolution):
		if not box.is_bounded:
			raise ConfigurationError('cannot sample an unbounded box without truncation')

		if resolution < 2:
			raise ConfigurationError('grid resolution must be at least 2')

		axes = []

		for lo, hi in zip(box.lower, box.upper):
			axes.append(np.linspace(lo, hi, int(resolution)) if hi > lo else np.array([lo]))

		return cls(tuple(axes))


	@classmethod
	def covering(cls, anchor, box):
		axes = []

		for axis, lo, hi in zip(anchor.axes, box.lower, box.upper):
			if axis.shape[0] < 2:
				axes.append(axis.copy())
				continue

			start = axis[0]
			step = axis[1] - axis[0]
			k_lo = int(np.ceil((lo - start) / step - SNAP))
			k_hi = int(np.floor((hi - start) / step + SNAP))
			extended = start + step * np.arange(k_lo, k_hi + 1)

			# reuse the anchor's own coordinates where the two overlap
			offset = -k_lo
			overlap = slice(max(offset, 0), min(offset + axis.shape[0], extended.shape[0]))
			source = slice(overlap.start - offset, overlap.stop - offset)
			extended[overlap] = axis[source]

			axes.append(extended)

		return cls(tuple(axes))


	@property
	def shape(self):
		return tuple(axis.shape[0] for axis in self.axes)

	@property
	def dim(self):
		return len(self.axes)

	@property
	def size(self):
		return int(np.prod(self.shape))

	@property
	def spacing(self):
		return np.array([axis[1] - axis[0] if axis.shape[0] > 1 else 0. for axis in self.axes])

	def points(self):
		mesh = np.meshgrid(*self.axes, indexing='ij')
		return np.stack([m.reshape(-1) for m in mesh], axis=1)

	def index_of(self, anchor):
		'''Offset of the anchor lattice's first node inside this lattice, per axis.'''
		offsets = []

		for own, other in zip(self.axes, anchor.axes):
			offsets.append(int(np.argmin(np.abs(own - other[0]))))

		return tuple(offsets)


	def offsets(self, radius, norm='euclidean', limits=None):
		'''
		Yields (offset, length) for integer offsets d with |d·spacing| <= radius,
		one representative per ±d pair. The zero offset is skipped.
		'''
		spacing = self.spacing
		ranges = []

		for i, n in enumerate(self.shape):
			if n < 2:
				ranges.append(range(0, 1))
				continue

			r = int(np.floor(radius / spacing[i] + SNAP)) if np.isfinite(radius) else n - 1
			r = min(r, n - 1)

			if limits is not None:
				r = min(r, limits[i])

			ranges.append(range(-r, r + 1))

		for offset in itertools.product(*ranges):
			if not _is_positive(offset):
				continue

			step = np.asarray(offset) * spacing

			if norm == 'max':
				length = float(np.max(np.abs(step)))
			else:
				length = float(np.sqrt(np.sum(step ** 2)))

			if length <= radius * (1 + SNAP):
				yield offset, length


def _is_positive(offset):
	for d in offset:
		if d != 0:
			return d > 0

	return False


def overlap(shape, offset):
	'''Index blocks a, b such that grid[b] is grid[a] shifted by offset.'''
	assert len(shape) == len(offset), 'offset has %d axes, grid has %d' % (len(offset), len(shape))

	a, b = [], []

	for n, d in zip(shape, offset):
		a.append(slice(max(0, -d), n - max(0, d)))
		b.append(slice(max(0, d), n - max(0, -d)))

	return tuple(a), tuple(b)


def subsample(points, budget):
	stride = max(1, int(np.ceil(points.shape[0] / max(budget, 1))))
	return points[::stride], stride


def spread_unit_vectors(k):
	'''k+1 unit vectors in R^k forming a regular simplex.'''
	if k == 1:
		return np.array([[1.], [-1.]])

	vertices = np.eye(k + 1) - 1. / (k + 1)
	_, _, vt = np.linalg.svd(vertices)
	coords = vertices @ vt[:k].T

	return coords / np.linalg.norm(coords, axis=1, keepdims=True)
