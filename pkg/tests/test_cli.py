import json
import os
import pytest

from korovkit.cli import main
from korovkit.modules.report import read_csv


def run(tmp_path, *argv, name='out.csv'):
	out = str(tmp_path / name)
	code = main(list(argv) + ['--out', out])

	with open(out, encoding='utf-8') as f:
		return code, f.read()


def write_config(tmp_path, data, name='config.json'):
	path = tmp_path / name
	path.write_text(json.dumps(data))
	return str(path)


def test_bound_on_a_compact_domain(tmp_path, configs):
	code, text = run(tmp_path, 'bound', '--config', os.path.join(configs, 'bernstein_bound.json'), '--n', '10', '20')
	comments, columns, rows = read_csv(text)

	assert code == 0
	assert comments == ['# korovkit bound seed=0']
	assert columns[:3] == ['label', 'n', 't1']
	assert len(rows) == 2 * (21 + 1)
	assert all(row[columns.index('valid')] == 'true' for row in rows)
	assert rows[0][0] == 'bernstein:u1^2'
	assert [row[2] for row in rows if row[2] == 'sup'] == ['sup', 'sup']


def test_bound_with_growth(tmp_path, configs):
	path = write_config(tmp_path, {
		'operator': {'name': 'szasz', 'n': [10, 100]},
		'targets': ['u1^2', {'builtin': 'sin'}],
		'options': {'sample_resolution': 3}
	})
	code, text = run(tmp_path, 'bound', '--config', path)
	_, columns, rows = read_csv(text)

	assert code == 0
	assert all(row[columns.index('valid')] == 'true' for row in rows)
	assert {row[columns.index('M')] for row in rows if row[0] == 'szasz:u1^2' and row[2] != 'sup'} == {'3.0'}


def test_bound_is_deterministic(tmp_path, configs):
	argv = ['bound', '--config', os.path.join(configs, 'bernstein_bound.json'), '--n', '10', '20', '--seed', '5']

	_, first = run(tmp_path, *argv, name='first.csv')
	_, second = run(tmp_path, *argv, name='second.csv')

	assert first == second
	assert first.startswith('# korovkit bound seed=5\n')


@pytest.mark.parametrize('argv', [
	['converge', '--config', 'szasz_converge.json'],
	['equivalence', '--config', 'bernstein_equivalence.json', '--set', 'options.sample_resolution=9'],
	['check-operator', '--config', 'negative_weight_check.json'],
	['bound', '--config', 'szasz_growth_bound.json', '--set', 'options.sample_resolution=5']
])
def test_subcommands_are_deterministic(tmp_path, configs, argv):
	argv = [os.path.join(configs, arg) if arg.endswith('.json') else arg for arg in argv]

	first_code, first = run(tmp_path, *argv, name='first.csv')
	second_code, second = run(tmp_path, *argv, name='second.csv')

	assert first_code == second_code
	assert first == second

	tables = []

	for name in ('first', 'second'):
		out = str(tmp_path / (name + '.txt'))
		assert main(['table', '--input', str(tmp_path / (name + '.csv')), '--out', out]) == 0

		with open(out, encoding='utf-8') as f:
			tables.append(f.read())

	assert tables[0] == tables[1]


def test_converge(tmp_path, configs):
	code, text = run(tmp_path, 'converge', '--config', os.path.join(configs, 'szasz_converge.json'))
	comments, columns, rows = read_csv(text)

	assert code == 0
	assert comments == ['# korovkit converge seed=0 threshold=0.01']
	assert columns == ['statement', 'label', 'n', 'defect', 'slope', 'verdict']

	g_rows = [row for row in rows if row[0] == 'b' and row[1] == 'g']
	assert [row[2] for row in g_rows] == ['10', '100', '1000']
	assert all(abs(float(row[3]) - 1. / int(row[2])) < 1e-9 for row in g_rows)
	assert all(row[5] == 'true' for row in g_rows)
	assert abs(float(g_rows[0][4]) + 1.) < 1e-6


def test_converge_fails_above_threshold(tmp_path, configs):
	code, _ = run(tmp_path, 'converge', '--config', os.path.join(configs, 'szasz_converge.json'), '--threshold', '1e-4')

	assert code == 2


def test_equivalence(tmp_path, configs):
	code, text = run(
		tmp_path, 'equivalence',
		'--config', os.path.join(configs, 'bernstein_equivalence.json'),
		'--set', 'options.sample_resolution=9'
	)
	_, _, rows = read_csv(text)

	assert code == 0
	assert {row[0] for row in rows} == {'a', 'b', 'c', 'd', 'e', 'f', 'corollary'}
	assert all(row[5] == 'true' for row in rows)


def test_check_operator_reports_the_negative_atom(tmp_path, configs):
	code, text = run(tmp_path, 'check-operator', '--config', os.path.join(configs, 'negative_weight_check.json'))
	_, columns, rows = read_csv(text)
	checks = {row[0]: row for row in rows}

	assert code == 2
	assert checks['positivity'][3] == 'false'
	assert checks['positivity'][6] == '-0.5@-1.0'
	assert checks['domination'][3] == 'false'
	assert checks['domination'][4] == '1.0'
	assert checks['regularity'][3] == 'true'


def test_check_operator_passes_for_bernstein(tmp_path):
	path = write_config(tmp_path, {'operator': {'name': 'bernstein', 'n': [5, 10]}, 'targets': ['u1^2', '(u1, 1 - u1)']})
	code, text = run(tmp_path, 'check-operator', '--config', path)
	_, _, rows = read_csv(text)

	assert code == 0
	assert [row[0] for row in rows[:5]] == ['positivity', 'domination', 'regularity', 'domination', 'constants']


def test_table(tmp_path, configs):
	_, text = run(tmp_path, 'bound', '--config', os.path.join(configs, 'bernstein_bound.json'), '--n', '10')
	csv_path = str(tmp_path / 'out.csv')
	table_path = str(tmp_path / 'table.txt')

	assert main(['table', '--input', csv_path, '--out', table_path]) == 0

	with open(table_path, encoding='utf-8') as f:
		table = f.read()

	_, _, rows = read_csv(text)

	for row in rows:
		assert row[3] in table

	alias_path = str(tmp_path / 'alias.txt')
	assert main(['table', '--config', csv_path, '--out', alias_path]) == 0

	with open(alias_path, encoding='utf-8') as f:
		assert f.read() == table


@pytest.mark.parametrize('data, code', [
	({'operator': {'name': 'bernstein', 'n': [10]}, 'colour': 'blue'}, 64),
	({'operator': {'name': 'bernstein', 'n': [10]}, 'targets': ['u1 +']}, 64),
	({'operator': {'name': 'szasz', 'n': [10]}, 'targets': ['exp(u1^2)']}, 65),
	({'operator': {'name': 'szasz', 'n': [10]}, 'growth': {'expression': '1 + abs(u1)'}, 'targets': ['u1']}, 65)
])
def test_exit_codes(tmp_path, data, code):
	path = write_config(tmp_path, data)

	assert main(['bound', '--config', path, '--out', str(tmp_path / 'out.csv')]) == code


def test_converge_rejects_an_affine_growth_function(tmp_path):
	path = write_config(tmp_path, {
		'operator': {'name': 'bernstein', 'n': [10, 100, 1000]},
		'growth': {'expression': '2 + u1'}
	})

	assert main(['converge', '--config', path, '--out', str(tmp_path / 'out.csv')]) == 65


def test_converge_needs_three_indices(tmp_path):
	path = write_config(tmp_path, {'operator': {'name': 'bernstein', 'n': [10, 20]}})

	assert main(['converge', '--config', path, '--out', str(tmp_path / 'out.csv')]) == 64


def test_usage_errors_exit_64(tmp_path):
	with pytest.raises(SystemExit) as error:
		main(['bound'])

	assert error.value.code == 64


def test_bad_override(tmp_path, configs):
	assert main(['bound', '--config', os.path.join(configs, 'bernstein_bound.json'), '--set', 'options.seed']) == 64
