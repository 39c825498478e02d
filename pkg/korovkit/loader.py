import os
import logging
import numpy as np

from .interfaces import Box, Domain, OperatorPair
from .errors import DomainError, FamilyParseError
from .modules.families import MeasureFamily


logger = logging.getLogger(__name__)

families = dict()


class TabulatedFamily(MeasureFamily):
	'''Atoms listed explicitly for a finite set of evaluation points.'''

	def __init__(self, n, dim, label, blocks, l_blocks, constant_preserving=False, regular=True, k=1):
		super().__init__(n, dim, label, constant_preserving=constant_preserving, regular=regular, metadata={'source': 'file'})
		self.k = k
		self.points = np.array([t for t, _, _ in blocks]).reshape(-1, dim)
		self.blocks = blocks
		self.l_blocks = l_blocks

	def lookup(self, t):
		if self.points.shape[0] == 0:
			raise DomainError('family %s lists no evaluation points' % self.label)

		distance = np.max(np.abs(self.points - t[None, :]), axis=1)
		index = int(np.argmin(distance))

		if distance[index] > 1e-12:
			raise DomainError('family %s has no atoms at t=%s' % (self.label, t.tolist()))

		return index

	def compute_atoms(self, t):
		_, nodes, weights = self.blocks[self.lookup(t)]
		return nodes, weights

	def compute_l_atoms(self, t):
		index = self.lookup(t)

		if self.l_blocks[index] is None:
			return self.atoms_at(t)

		nodes, weights = self.l_blocks[index]
		return nodes, weights



def _floats(tokens, number, what):
	if len(tokens) != number:
		raise ValueError('%s needs %d numbers, got %d' % (what, number, len(tokens)))

	return [float(token) for token in tokens]


def parse_family(text, label=None):
	'''
	Reads the line-oriented family format:

		m <dim>
		n <index>
		k <weight components of L-atoms>      (optional, default 1)
		flags constant_preserving regular     (or: flags none)
		label <text>                          (optional)
		X|K|K1 <lo_1> <hi_1> ... <lo_m> <hi_m> (optional domain)
		t: <x_1> ... <x_m>
		<w> <u_1> ... <u_m>
		L <w_1> ... <w_k> <u_1> ... <u_m>

	'#' starts a comment. Returns (family, domain or None).
	'''
	header = {'k': 1, 'flags': set(), 'label': label or 'tabulated'}
	boxes = {}
	blocks = []
	l_blocks = []
	current = None

	for number, raw in enumerate(text.splitlines(), start=1):
		line = raw.split('#', 1)[0].strip()

		if not line:
			continue

		tokens = line.split()
		key = tokens[0]

		try:
			if key == 't:' or line.startswith('t:'):
				if 'm' not in header or 'n' not in header:
					raise ValueError('"m" and "n" must precede the first block')

				values = line[2:].split()
				current = (np.array(_floats(values, header['m'], 't:')), [], [])
				blocks.append(current)
			elif key == 'L':
				if current is None:
					raise ValueError('L-atom outside a "t:" block')

				values = _floats(tokens[1:], header['k'] + header['m'], 'L-atom')
				current[2].append(values)
			elif key in ('m', 'n', 'k'):
				if blocks:
					raise ValueError('"%s" must appear before the first block' % key)

				value = int(_floats(tokens[1:], 1, key)[0])

				if value < 1:
					raise ValueError('"%s" must be a positive integer' % key)

				header[key] = value
			elif key == 'flags':
				flags = set(tokens[1:]) - {'none'}
				unknown = flags - {'constant_preserving', 'regular'}

				if unknown:
					raise ValueError('unknown flags: %s' % ', '.join(sorted(unknown)))

				header['flags'] = flags
			elif key == 'label':
				header['label'] = line[len('label'):].strip()
			elif key in ('X', 'K', 'K1'):
				if 'm' not in header:
					raise ValueError('"m" must precede domain lines')

				values = _floats(tokens[1:], 2 * header['m'], key)
				boxes[key] = Box(values[0::2], values[1::2])
			else:
				if current is None:
					raise ValueError('atom outside a "t:" block')

				current[1].append(_floats(tokens, 1 + header['m'], 'atom'))
		except (ValueError, DomainError) as error:
			raise FamilyParseError(str(error), line=number)

	if 'm' not in header or 'n' not in header:
		raise FamilyParseError('missing "m" or "n" header')

	m = header['m']
	k = header['k']
	parsed = []

	for t, atoms, l_atoms in blocks:
		atoms = np.array(atoms, dtype=float).reshape(-1, 1 + m)
		parsed.append((t, atoms[:, 1:], atoms[:, 0]))

		if l_atoms:
			l_atoms = np.array(l_atoms, dtype=float)
			weights = l_atoms[:, :k]
			l_blocks.append((l_atoms[:, k:], weights[:, 0] if k == 1 else weights))
		else:
			l_blocks.append(None)

	family = TabulatedFamily(
		header['n'],
		m,
		header['label'],
		parsed,
		l_blocks,
		constant_preserving='constant_preserving' in header['flags'],
		regular='regular' in header['flags'],
		k=k
	)

	domain = None

	if boxes:
		if set(boxes) != {'X', 'K', 'K1'}:
			raise FamilyParseError('domain needs all of X, K and K1')

		domain = Domain(boxes['X'], boxes['K'], boxes['K1'])

	return family, domain


def _default_domain(family):
	'''X = K = the bounding box of every point and node in the file, K1 its central half.'''
	everything = [family.points] + [nodes for _, nodes, _ in family.blocks]
	everything = np.vstack([block.reshape(-1, family.dim) for block in everything])
	lower = everything.min(axis=0)
	upper = everything.max(axis=0)
	quarter = (upper - lower) / 4

	return Domain(Box(lower, upper), Box(lower, upper), Box(lower + quarter, upper - quarter))


def load_family(path: str, domain: Domain = None):
	key = os.path.abspath(path)

	if key in families:
		family, stored = families[key]
	else:
		with open(path, encoding='utf-8') as f:
			family, stored = parse_family(f.read(), label=os.path.splitext(os.path.basename(path))[0])

		stored = stored or _default_domain(family)
		families[key] = family, stored

		logger.debug('loaded family %s from %s (%d points)', family.label, path, family.points.shape[0])

	return OperatorPair(family, domain or stored)


def format_family(pair: OperatorPair, points):
	family = pair.family
	domain = pair.domain
	m = domain.dim
	points = np.asarray(points, dtype=float).reshape(-1, m)
	blocks = []
	k = 1

	for t in points:
		atoms = family.atoms_at(t)
		l_atoms = family.l_atoms_at(t)

		if l_atoms is atoms:
			l_atoms = None
		elif l_atoms.weights.ndim == 2:
			k = l_atoms.weights.shape[1]

		blocks.append((t, atoms, l_atoms))

	flags = [name for name in ('constant_preserving', 'regular') if getattr(family, name)]
	lines = [
		'm %d' % m,
		'n %d' % family.n,
		'flags %s' % (' '.join(flags) or 'none'),
		'label %s' % family.label
	]

	if k > 1:
		lines.insert(2, 'k %d' % k)

	for name in ('X', 'K', 'K1'):
		box = getattr(domain, name)
		lines.append('%s %s' % (name, ' '.join('%r %r' % bound for bound in box.bounds())))

	for t, atoms, l_atoms in blocks:
		lines.append('t: %s' % ' '.join(repr(float(x)) for x in t))

		for node, weight in zip(atoms.nodes, atoms.weights):
			lines.append('%r %s' % (float(weight), ' '.join(repr(float(x)) for x in node)))

		if l_atoms is not None:
			for node, weight in zip(l_atoms.nodes, l_atoms.weights):
				weight = np.atleast_1d(weight)
				lines.append('L %s %s' % (' '.join(repr(float(w)) for w in weight), ' '.join(repr(float(x)) for x in node)))

	return '\n'.join(lines) + '\n'


def save_family(pair: OperatorPair, points, path: str):
	with open(path, 'w', encoding='utf-8') as f:
		f.write(format_family(pair, points))

	unload(path)


def unload(path):
	key = os.path.abspath(path)

	if key not in families:
		return

	del families[key]


def unload_all():
	for key in list(families.keys()):
		del families[key]
