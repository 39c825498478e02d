import os
import json
import logging
from dataclasses import dataclass, field, fields
from typing import Optional

from .interfaces import Box, Domain
from .errors import ConfigurationError, DomainError
from .korovkin import DEFAULT_THRESHOLD, default_battery
from .loader import load_family
from .modules.families import make_tensor, pick_family
from .modules.growth import pick_growth
from .modules.expression import growth_from_expression, parse_expression


logger = logging.getLogger(__name__)


def _bounds(value, m, name):
	try:
		bounds = [(float(lo), float(hi)) for lo, hi in value]
	except (TypeError, ValueError):
		raise ConfigurationError('domain.%s must be a list of [lower, upper] pairs' % name)

	if len(bounds) != m:
		raise ConfigurationError('domain.%s has %d axes, m is %d' % (name, len(bounds), m))

	return bounds


@dataclass
class DomainSpec:
	m: int = 1
	X: Optional[list] = None
	K: Optional[list] = None
	K1: Optional[list] = None
	shape: Optional[str] = None
	grid_resolution: int = 201
	truncation_radius: Optional[float] = None

	def build(self):
		'''The configured domain, or None to use the operator family's own.'''
		if self.X is None and self.K is None and self.K1 is None:
			return None

		if self.X is None or self.K is None or self.K1 is None:
			raise ConfigurationError('domain needs all of X, K and K1')

		domain = Domain.from_bounds(
			X=_bounds(self.X, self.m, 'X'),
			K=_bounds(self.K, self.m, 'K'),
			K1=_bounds(self.K1, self.m, 'K1'),
			grid_resolution=self.grid_resolution,
			truncation_radius=self.truncation_radius
		)

		if self.shape is not None and self.shape != domain.shape:
			raise ConfigurationError('domain.shape is "%s" but X describes a "%s" domain' % (self.shape, domain.shape))

		return domain


@dataclass
class OperatorSpec:
	name: Optional[str] = None
	n: list = field(default_factory=list)
	file: Optional[object] = None
	options: dict = field(default_factory=dict)

	def validate(self, base_dir):
		if (self.name is None) == (self.file is None):
			raise ConfigurationError('operator needs exactly one of "name" or "file"')

		if self.name is not None:
			pick_family(self.name)

			if not self.n:
				raise ConfigurationError('operator.n must list at least one index')

			if any(b <= a for a, b in zip(self.n, self.n[1:])):
				raise ConfigurationError('operator.n must be strictly increasing, got %s' % self.n)

		if self.file is not None:
			files = [self.file] if isinstance(self.file, str) else list(self.file)
			self.file = [path if os.path.isabs(path) else os.path.join(base_dir, path) for path in files]

			for path in self.file:
				if not os.path.exists(path):
					raise ConfigurationError('family file %s does not exist' % path)


@dataclass
class GrowthSpec:
	name: Optional[str] = 'quadratic'
	expression: Optional[str] = None

	def build(self, dim):
		if self.expression is not None:
			return growth_from_expression(self.expression, dim)

		return pick_growth(self.name)


@dataclass
class TargetSpec:
	expression: Optional[str] = None
	builtin: Optional[str] = None
	label: Optional[str] = None
	codim: Optional[int] = None

	def validate(self):
		if (self.expression is None) == (self.builtin is None):
			raise ConfigurationError('each target needs exactly one of "expression" or "builtin"')

		if self.expression is not None:
			expression = parse_expression(self.expression)

			if self.codim is not None and self.codim != expression.codim:
				raise ConfigurationError('target %s has codim %d, declared %d' % (self.expression, expression.codim, self.codim))

	def build(self, domain):
		if self.builtin is not None:
			battery = dict(default_battery(domain))

			if self.builtin not in battery:
				raise ConfigurationError('builtin target "%s" does not exist' % self.builtin)

			return self.label or self.builtin, battery[self.builtin]

		label = self.label or self.expression
		return label, parse_expression(self.expression).to_function(domain.dim, label=label)


@dataclass
class RunOptions:
	threshold: float = DEFAULT_THRESHOLD
	delta: object = 'auto'
	seed: int = 0
	out: Optional[str] = None
	sample_resolution: int = 21
	codim: int = 1


@dataclass
class RunConfig:
	domain: DomainSpec = field(default_factory=DomainSpec)
	operator: OperatorSpec = field(default_factory=OperatorSpec)
	growth: GrowthSpec = field(default_factory=GrowthSpec)
	targets: list = field(default_factory=list)
	options: RunOptions = field(default_factory=RunOptions)
	base_dir: str = '.'

	def validate(self):
		self.operator.validate(self.base_dir)

		for target in self.targets:
			target.validate()

		try:
			self.domain.build()
		except DomainError as error:
			raise ConfigurationError('invalid domain: %s' % error)

		return self


	def build_pairs(self):
		domain = self.domain.build()

		if self.operator.file is not None:
			return [load_family(path, domain=domain) for path in self.operator.file]

		factory = pick_family(self.operator.name)
		pairs = []

		for n in self.operator.n:
			if domain is None or domain.dim == 1:
				pairs.append(factory(n, domain=domain, **self.operator.options))
				continue

			axes = []

			for i in range(domain.dim):
				axis = Domain(
					Box(domain.X.lower[i], domain.X.upper[i]),
					Box(domain.K.lower[i], domain.K.upper[i]),
					Box(domain.K1.lower[i], domain.K1.upper[i]),
					grid_resolution=domain.grid_resolution
				)
				axes.append(factory(n, domain=axis, **self.operator.options))

			pairs.append(make_tensor(axes, domain.dim, domain=domain))

		return pairs


	def build_targets(self, domain):
		if not self.targets:
			return default_battery(domain)

		return [target.build(domain) for target in self.targets]



SECTIONS = {
	'domain': DomainSpec,
	'operator': OperatorSpec,
	'growth': GrowthSpec,
	'options': RunOptions
}


def _construct(cls, values, where):
	if not isinstance(values, dict):
		raise ConfigurationError('%s must be an object' % where)

	known = {f.name for f in fields(cls)}
	unknown = set(values) - known

	if unknown:
		raise ConfigurationError('unknown keys in %s: %s' % (where, ', '.join(sorted(unknown))))

	return cls(**values)


def parse_value(text):
	try:
		return json.loads(text)
	except ValueError:
		return text


def apply_overrides(data, overrides):
	'''Sets dotted keys, e.g. ("options.threshold", 0.01), on the raw config mapping.'''
	for key, value in overrides:
		path = key.split('.')
		node = data

		for part in path[:-1]:
			node = node.setdefault(part, {})

			if not isinstance(node, dict):
				raise ConfigurationError('cannot override %s: %s is not an object' % (key, part))

		node[path[-1]] = value

	return data


def config_from_dict(data, base_dir='.'):
	unknown = set(data) - set(SECTIONS) - {'targets'}

	if unknown:
		raise ConfigurationError('unknown config sections: %s' % ', '.join(sorted(unknown)))

	sections = {name: _construct(cls, data.get(name, {}), name) for name, cls in SECTIONS.items()}
	targets = data.get('targets', [])

	if not isinstance(targets, list):
		raise ConfigurationError('targets must be a list')

	targets = [
		_construct(TargetSpec, {'expression': target} if isinstance(target, str) else target, 'targets[%d]' % i)
		for i, target in enumerate(targets)
	]

	return RunConfig(targets=targets, base_dir=base_dir, **sections).validate()


def load_config(path, overrides=()):
	try:
		with open(path, encoding='utf-8') as f:
			data = json.load(f)
	except OSError as error:
		raise ConfigurationError('cannot read config %s: %s' % (path, error))
	except ValueError as error:
		raise ConfigurationError('config %s is not valid JSON: %s' % (path, error))

	if not isinstance(data, dict):
		raise ConfigurationError('config %s must hold a JSON object' % path)

	apply_overrides(data, overrides)
	logger.debug('config %s: %s', path, data)

	return config_from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))
