import sys
import logging
import argparse

from .errors import EXIT_CONFIG, EXIT_OK, EXIT_VERDICT, ConfigurationError, KorovkitError
from .config import load_config, parse_value
from .context import progress_tracking
from .core import ModulusCache
from .bounds import estimate_M, growth_bound, shisha_mond_bound, uniform_bound
from .operators import check_constants, check_domination, check_positivity, check_regularity
from .korovkin import ConvergenceReport, check_statement_a, check_statement_b, equivalence_harness
from .modules.growth import validate_growth
from .modules.utils import Lattice, spread_unit_vectors
from .modules.report import (
	CHECK_COLUMNS, MATRIX_COLUMNS, bound_columns, bound_row, check_row, format_csv, header_line, matrix_row, render_table
)


logger = logging.getLogger('korovkit')


class ArgumentParser(argparse.ArgumentParser):
	def error(self, message):
		self.print_usage(sys.stderr)
		self.exit(EXIT_CONFIG, '%s: error: %s\n' % (self.prog, message))



def log_progress(fraction, stage):
	logger.debug('%s: %.0f%%', stage, 100 * fraction)


def emit(text, out):
	if out:
		with open(out, 'w', encoding='utf-8') as f:
			f.write(text)
	else:
		sys.stdout.write(text)


def configure(args):
	overrides = []

	for item in args.set or []:
		if '=' not in item:
			raise ConfigurationError('--set expects key=value, got %r' % item)

		key, value = item.split('=', 1)
		overrides.append((key.strip(), parse_value(value.strip())))

	if args.n:
		overrides.append(('operator.n', args.n))
	if args.seed is not None:
		overrides.append(('options.seed', args.seed))
	if args.threshold is not None:
		overrides.append(('options.threshold', args.threshold))
	if args.delta is not None:
		overrides.append(('options.delta', parse_value(args.delta)))

	config = load_config(args.config, overrides)

	if args.out:
		config.options.out = args.out

	return config


def _delta(options):
	if options.delta in (None, 'auto'):
		return 'auto'

	try:
		return float(options.delta)
	except (TypeError, ValueError):
		raise ConfigurationError('options.delta must be "auto" or a number, got %r' % (options.delta,))


def _setup(args):
	config = configure(args)
	pairs = config.build_pairs()
	domain = pairs[0].domain
	targets = config.build_targets(domain)

	return config, pairs, domain, targets


def cmd_bound(args):
	config, pairs, domain, targets = _setup(args)
	options = config.options
	delta = _delta(options)
	bounded = domain.bounded_mode
	g = config.growth.build(domain.dim)
	sample = Lattice.over(domain.K if bounded else domain.K1, options.sample_resolution).points()
	constants = {}

	if not bounded:
		validate_growth(g, domain, seed=options.seed)
		constants = {label: estimate_M(F, g, domain) for label, F in targets}

	rows = []
	valid = True

	for pair in pairs:
		for label, F in targets:
			omega = ModulusCache.over(F, domain.K, domain.grid_resolution)
			reports = []

			for t in sample:
				if bounded:
					reports.append(shisha_mond_bound(pair, F, t, delta=delta, omega=omega))
				else:
					reports.append(growth_bound(pair, F, g, t, delta=delta, M=constants[label], omega=omega))

			reports.append(uniform_bound(pair, F))

			for report in reports:
				report.label = '%s:%s' % (pair.label, label)
				valid = valid and report.valid
				rows.append(bound_row(report, domain.dim))

	emit(format_csv(header_line('bound', options.seed), bound_columns(domain.dim), rows), options.out)
	return EXIT_OK if valid else EXIT_VERDICT


def _matrix(report, options, command):
	rows = [matrix_row(row) for row in report.rows()]
	emit(format_csv(header_line(command, options.seed, threshold=repr(options.threshold)), MATRIX_COLUMNS, rows), options.out)

	for finding in report.findings:
		logger.warning('finding: %s', finding)

	return EXIT_OK if report.verdict else EXIT_VERDICT


def cmd_converge(args):
	config, pairs, domain, _ = _setup(args)
	options = config.options
	g = config.growth.build(domain.dim)
	validate_growth(g, domain, seed=options.seed)
	grid = Lattice.over(domain.K1, options.sample_resolution).points()

	report = ConvergenceReport(threshold=options.threshold)
	report.statements['a'] = check_statement_a(pairs, g, grid, options.threshold, options.codim)
	report.statements['b'] = check_statement_b(pairs, g, grid, options.threshold, options.codim)

	return _matrix(report, options, 'converge')


def cmd_equivalence(args):
	config, pairs, domain, targets = _setup(args)
	options = config.options
	g = config.growth.build(domain.dim)
	validate_growth(g, domain, seed=options.seed)

	report = equivalence_harness(
		pairs,
		g,
		targets=targets,
		threshold=options.threshold,
		K1_grid=Lattice.over(domain.K1, options.sample_resolution).points(),
		K_grid=Lattice.over(domain.K, options.sample_resolution).points(),
		codim=options.codim
	)

	return _matrix(report, options, 'equivalence')


def cmd_check_operator(args):
	config, pairs, domain, targets = _setup(args)
	options = config.options
	constants = spread_unit_vectors(max(options.codim, 2))
	rows = []
	passed = True

	for pair in pairs:
		reports = [check_positivity(pair)]

		for label, F in targets:
			reports.append(check_domination(pair, F))

			if not hasattr(F, 'codim'):
				reports.append(check_regularity(pair, F, constants[0]))

		reports += [check_constants(pair, c) for c in constants]

		for report in reports:
			if not report.passed:
				logger.warning(report.describe())

			passed = passed and report.passed
			rows.append(check_row(report, pair.n))

	emit(format_csv(header_line('check-operator', options.seed), CHECK_COLUMNS, rows), options.out)
	return EXIT_OK if passed else EXIT_VERDICT


def cmd_table(args):
	try:
		with open(args.input, encoding='utf-8') as f:
			text = f.read()
	except OSError as error:
		raise ConfigurationError('cannot read %s: %s' % (args.input, error))

	emit(render_table(text), args.out)
	return EXIT_OK



def build_parser():
	parser = ArgumentParser(prog='korovkit', description='Korovkin-type approximation checks for positive linear operators')
	sub = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

	commands = {
		'bound': (cmd_bound, 'pointwise and uniform error bounds per (n, t)'),
		'converge': (cmd_converge, 'test-function defects and rates'),
		'check-operator': (cmd_check_operator, 'positivity, domination, regularity and constants'),
		'equivalence': (cmd_equivalence, 'full equivalence matrix of the convergence statements')
	}

	for name, (func, help) in commands.items():
		p = sub.add_parser(name, help=help)
		p.add_argument('--config', required=True)
		p.add_argument('--n', type=int, nargs='+')
		p.add_argument('--out')
		p.add_argument('--seed', type=int)
		p.add_argument('--threshold', type=float)
		p.add_argument('--delta')
		p.add_argument('--set', action='append', metavar='KEY=VALUE')
		p.add_argument('-v', '--verbose', action='store_true')
		p.set_defaults(func=func)

	p = sub.add_parser('table', help='render a CSV as an aligned table')
	p.add_argument('--input', '--config', dest='input', required=True)
	p.add_argument('--out')
	p.add_argument('-v', '--verbose', action='store_true')
	p.set_defaults(func=cmd_table)

	return parser


def main(argv=None):
	args = build_parser().parse_args(argv)

	logging.basicConfig(
		level=logging.DEBUG if args.verbose else logging.WARNING,
		format='%(levelname)s %(name)s: %(message)s'
	)

	try:
		with progress_tracking(log_progress):
			return args.func(args)
	except KorovkitError as error:
		logger.error('%s', error)
		return error.exit_code


if __name__ == '__main__':
	sys.exit(main())
