import io
import csv
import numpy as np


BOUND_COLUMNS = ['bound', 'measured', 'valid', 'const_defect', 'omega', 'delta', 's1', 'gamma_sq', 'M', 'snh']
MATRIX_COLUMNS = ['statement', 'label', 'n', 'defect', 'slope', 'verdict']
CHECK_COLUMNS = ['check', 'label', 'n', 'passed', 'violation', 'witness', 'atoms']


def format_cell(value):
	if value is None:
		return ''
	if isinstance(value, (bool, np.bool_)):
		return 'true' if value else 'false'
	if isinstance(value, (int, np.integer)):
		return str(int(value))
	if isinstance(value, (float, np.floating)):
		return repr(float(value))
	if isinstance(value, (list, tuple, np.ndarray)):
		return ' '.join(format_cell(item) for item in np.asarray(value, dtype=object).reshape(-1))

	return str(value)


def header_line(command, seed, **extra):
	fields = ['seed=%d' % seed] + ['%s=%s' % (key, extra[key]) for key in sorted(extra)]
	return '# korovkit %s %s' % (command, ' '.join(fields))


def bound_columns(dim):
	return ['label', 'n'] + ['t%d' % (i + 1) for i in range(dim)] + BOUND_COLUMNS


def bound_row(report, dim):
	t = ['sup'] * dim if report.t is None else [format_cell(x) for x in report.t]

	return [report.label, format_cell(report.n)] + t + [format_cell(getattr(report, column)) for column in BOUND_COLUMNS]


def matrix_row(row):
	return [format_cell(row[column]) for column in MATRIX_COLUMNS]


def check_row(report, n):
	atoms = '; '.join('%s@%s' % (format_cell(weight), format_cell(node)) for _, node, weight in report.atoms)

	return [
		report.name,
		report.label,
		format_cell(n),
		format_cell(report.passed),
		format_cell(report.violation),
		format_cell(report.witness),
		atoms
	]


def write_csv(stream, header, columns, rows):
	stream.write(header + '\n')
	writer = csv.writer(stream, lineterminator='\n')
	writer.writerow(columns)

	for row in rows:
		writer.writerow(row)


def format_csv(header, columns, rows):
	stream = io.StringIO()
	write_csv(stream, header, columns, rows)
	return stream.getvalue()



def read_csv(text):
	'''Splits CSV text into its '#' comment lines, column names and rows of raw cells.'''
	comments = []
	body = []

	for line in text.splitlines():
		if line.startswith('#'):
			comments.append(line)
		elif line.strip():
			body.append(line)

	rows = list(csv.reader(body))

	if not rows:
		return comments, [], []

	return comments, rows[0], rows[1:]


def render_table(text):
	'''Aligned plain-text table; every cell is printed exactly as stored.'''
	comments, columns, rows = read_csv(text)

	if not columns:
		return '\n'.join(comments) + ('\n' if comments else '')

	width = len(columns)
	rows = [row + [''] * (width - len(row)) for row in rows]
	widths = [max(len(cell) for cell in column) for column in zip(columns, *rows)]

	def line(cells):
		return '  '.join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

	lines = comments + [line(columns), '  '.join('-' * w for w in widths)] + [line(row) for row in rows]
	return '\n'.join(lines) + '\n'
