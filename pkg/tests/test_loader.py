import os
import numpy as np
import pytest

from korovkit import load_family, save_family, make_bernstein, unload_all
from korovkit.loader import families, format_family, parse_family
from korovkit.modules.families import perturb_l_atoms
from korovkit.errors import DomainError, FamilyParseError


def test_negative_weight_file(negative_pair):
	family = negative_pair.family
	nodes, weights = family.atoms_at([0.5])

	assert family.label == 'negative'
	assert not family.constant_preserving and not family.regular
	assert nodes[:, 0].tolist() == [-1., 1.]
	assert weights.tolist() == [-0.5, 1.5]
	assert negative_pair.domain.K1.bounds() == [(-0.5, 0.5)]


def test_missing_point(negative_pair):
	with pytest.raises(DomainError):
		negative_pair.family.atoms_at([0.25])


@pytest.mark.parametrize('text, line', [
	('m 1\nn 1\nt: 0.5\n1.0\n', 4),
	('m 1\nn 1\n0.5 1.0\n', 3),
	('m 1\n\n# comment\nn 1\nflags regular shiny\n', 5),
	('m 1\nn 0\n', 2),
	('m 1\nn 1\nt: 0.5\n1.0 0.5\nm 2\n', 5),
	('m 1\nn 1\nt: 0.5\nL 1.0\n', 4),
	('m 1\nn 1\nK 1.0 0.0\n', 3)
])
def test_parse_errors_carry_the_line(text, line):
	with pytest.raises(FamilyParseError) as error:
		parse_family(text)

	assert error.value.line == line


def test_missing_header():
	with pytest.raises(FamilyParseError):
		parse_family('n 1\n')


def test_default_domain_is_the_bounding_box(tmp_path):
	path = tmp_path / 'two.fam'
	path.write_text('m 1\nn 3\nt: 0.0\n1.0 0.0\nt: 1.0\n0.5 2.0\n0.5 -2.0\n')
	pair = load_family(str(path))

	assert pair.domain.X.bounds() == [(-2., 2.)]
	assert pair.domain.K1.bounds() == [(-1., 1.)]
	assert pair.family.label == 'two'
	assert pair.n == 3


def test_saved_family_loads_back(tmp_path):
	pair = make_bernstein(5)
	path = str(tmp_path / 'bernstein.fam')
	save_family(pair, [[0.25], [0.5]], path)
	loaded = load_family(path)

	assert loaded.family.constant_preserving and loaded.family.regular
	assert loaded.domain.K1.bounds() == pair.domain.K1.bounds()

	for t in ([0.25], [0.5]):
		np.testing.assert_array_equal(loaded.family.atoms_at(t).weights, pair.family.atoms_at(t).weights)
		np.testing.assert_array_equal(loaded.family.atoms_at(t).nodes, pair.family.atoms_at(t).nodes)


def test_distinct_l_atoms_are_written():
	plain = format_family(make_bernstein(2), [[0.5]])
	perturbed = format_family(perturb_l_atoms(make_bernstein(2), 0.1), [[0.5]])

	assert '\nL ' not in plain
	assert perturbed.count('\nL ') == 3
	assert 'flags constant_preserving regular' in plain
	assert 'flags none' in perturbed


def test_loaded_families_are_cached(tmp_path):
	path = tmp_path / 'one.fam'
	path.write_text('m 1\nn 1\nt: 0.5\n1.0 0.5\n')

	first = load_family(str(path))
	second = load_family(str(path))

	assert first.family is second.family
	assert os.path.abspath(str(path)) in families

	unload_all()
	assert not families
	assert load_family(str(path)).family is not first.family
