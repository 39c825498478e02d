import numpy as np
import pytest

from korovkit import apply_S, make_bernstein, parse_expression
from korovkit.modules.expression import BinOp, Call, Num, Var, Vector, growth_from_expression
from korovkit.errors import ExpressionEvaluationError, ExpressionSyntaxError


@pytest.mark.parametrize('text, point, expected', [
	('u1 + 2*u2^2', [1., 3.], 19.),
	('2^3^2', [0.], 512.),
	('-2^2', [0.], -4.),
	('(1 - u1) / 4', [0.2], 0.2),
	('exp(0) + sin(0) + cos(0)', [0.], 2.),
	('abs(u1 - 3)', [1.], 2.),
	('sqrt(u1)', [9.], 3.),
	('norm()', [3., 4.], 5.),
	('norm(u1, 1)', [0.], 1.),
	('1.5e1 - u1', [5.], 10.)
])
def test_evaluate(text, point, expected):
	np.testing.assert_allclose(parse_expression(text)(point), expected, rtol=1e-14)


def test_tree_shape():
	root = parse_expression('u1 - 2 * u2').root

	assert root == BinOp('-', Var(1), BinOp('*', Num(2.), Var(2)))
	assert root.pos == 3
	assert root.right.pos == 7


def test_subtraction_is_left_associative():
	assert parse_expression('8 - 4 - 2')([0.]) == 2.


def test_vector_expressions():
	for text in ('(u1, exp(-u2))', 'u1, exp(-u2)'):
		expression = parse_expression(text)

		assert expression.is_vector
		assert expression.codim == 2
		np.testing.assert_allclose(expression([1., 0.]), [1., 1.])


def test_vectorised_evaluation():
	values = parse_expression('u1 * u2').evaluate(np.array([[1., 2.], [3., 4.]]))

	np.testing.assert_allclose(values, [2., 12.])


def test_formatting_parses_back():
	expression = parse_expression('-u1^2 + sin(u2) / 3, norm(u1, u2)')

	assert parse_expression(str(expression)).root == expression.root


@pytest.mark.parametrize('text, offset', [
	('u1 +', 4),
	('u1 $ 2', 3),
	('2 * (u1 + 1', 11),
	('u0 + 1', 0),
	('sin(u1, u2)', 0),
	('', 0)
])
def test_syntax_errors(text, offset):
	with pytest.raises(ExpressionSyntaxError) as error:
		parse_expression(text)

	assert error.value.offset == offset


def test_syntax_error_lists_expected_tokens():
	with pytest.raises(ExpressionSyntaxError) as error:
		parse_expression('u1 *')

	assert error.value.expected
	assert 'offset 4' in str(error.value)


@pytest.mark.parametrize('text, point, offset', [
	('u1 + 1/(u1-1)', [1.], 6),
	('sqrt(u1)', [-1.], 0),
	('2 + exp(u1)', [1000.], 4),
	('u2', [1.], 0)
])
def test_evaluation_errors(text, point, offset):
	with pytest.raises(ExpressionEvaluationError) as error:
		parse_expression(text)(point)

	assert error.value.offset == offset


def test_dimension():
	expression = parse_expression('u1 + u3')

	assert expression.dim_required == 3
	assert expression.to_function(3)([1., 2., 3.]) == 4.

	with pytest.raises(ExpressionEvaluationError):
		expression.to_function(2)


def test_growth_from_expression():
	g = growth_from_expression('1 + u1^2', 1)

	np.testing.assert_allclose(g([2.]), 5.)
	np.testing.assert_allclose(g.gradient(np.array([[2.], [-1.]])), [[4.], [-2.]], rtol=1e-8)

	with pytest.raises(ExpressionSyntaxError):
		growth_from_expression('(u1, u1)', 1)


def test_evaluation_errors_carry_the_failing_point():
	expression = parse_expression('1 + 2 / (u1 - 1)')

	with pytest.raises(ExpressionEvaluationError) as error:
		expression.evaluate([[0.], [1.], [3.]])

	assert error.value.offset == 6
	assert error.value.node.tolist() == [1.]
	assert 'at node [1.0]' in str(error.value)


def test_expression_targets_report_the_atom_node():
	F = parse_expression('1/u1').to_function(1)

	with pytest.raises(ExpressionEvaluationError) as error:
		apply_S(make_bernstein(4), F, 0.5)

	assert error.value.offset == 1
	assert error.value.node.tolist() == [0.]
