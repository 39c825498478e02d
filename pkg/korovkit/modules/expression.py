import numpy as np
from dataclasses import dataclass, field
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from ..interfaces import GrowthFunction, ScalarFunction, VectorFunction, as_points
from ..errors import ExpressionEvaluationError, ExpressionSyntaxError
from .growth import numeric_gradient


grammar = r'''
?start: expr
	| "(" expr ("," expr)+ ")" -> vector
	| expr ("," expr)+ -> vector

?expr: sum

?sum: product
	| sum PLUS product -> add
	| sum MINUS product -> sub

?product: unary
	| product STAR unary -> mul
	| product SLASH unary -> div

?unary: power
	| "-" unary -> neg

?power: atom
	| atom CIRCUMFLEX unary -> pow

?atom: NUMBER -> number
	| VAR -> var
	| FUNC "(" (expr ("," expr)*)? ")" -> call
	| "(" expr ")"

VAR: /u[1-9][0-9]*/
FUNC: "exp" | "sin" | "cos" | "abs" | "sqrt" | "norm"
PLUS: "+"
MINUS: "-"
STAR: "*"
SLASH: "/"
CIRCUMFLEX: "^"

%import common.NUMBER
%import common.WS
%ignore WS
'''

parser = Lark(grammar, parser='lalr', propagate_positions=True)

UNARY = {
	'exp': np.exp,
	'sin': np.sin,
	'cos': np.cos,
	'abs': np.abs,
	'sqrt': np.sqrt
}


@dataclass(frozen=True)
class Num:
	value: float
	pos: int = field(default=0, compare=False)

@dataclass(frozen=True)
class Var:
	index: int
	pos: int = field(default=0, compare=False)

@dataclass(frozen=True)
class Neg:
	operand: object
	pos: int = field(default=0, compare=False)

@dataclass(frozen=True)
class BinOp:
	op: str
	left: object
	right: object
	pos: int = field(default=0, compare=False)

@dataclass(frozen=True)
class Call:
	name: str
	args: tuple
	pos: int = field(default=0, compare=False)

@dataclass(frozen=True)
class Vector:
	items: tuple
	pos: int = field(default=0, compare=False)



@v_args(meta=True)
class ASTBuilder(Transformer):
	def __init__(self, text):
		super().__init__()
		self.text = text

	def _offset(self, pos):
		return len(self.text[:pos].encode('utf-8'))

	def number(self, meta, items):
		return Num(float(items[0]), self._offset(items[0].start_pos))

	def var(self, meta, items):
		return Var(int(items[0][1:]), self._offset(items[0].start_pos))

	def neg(self, meta, items):
		return Neg(items[-1], self._offset(meta.start_pos))

	def _binop(self, op, meta, items):
		left, token, right = items
		return BinOp(op, left, right, self._offset(token.start_pos))

	def add(self, meta, items):
		return self._binop('+', meta, items)

	def sub(self, meta, items):
		return self._binop('-', meta, items)

	def mul(self, meta, items):
		return self._binop('*', meta, items)

	def div(self, meta, items):
		return self._binop('/', meta, items)

	def pow(self, meta, items):
		return self._binop('^', meta, items)

	def call(self, meta, items):
		name = str(items[0])
		args = tuple(items[1:])
		pos = self._offset(items[0].start_pos)

		if name != 'norm' and len(args) != 1:
			raise ExpressionSyntaxError(self.text, pos, expected={'exactly one argument to %s' % name})

		return Call(name, args, pos)

	def vector(self, meta, items):
		return Vector(tuple(items), self._offset(meta.start_pos))



def format_node(node):
	'''Fully parenthesized text; parsing it back gives an equal tree.'''
	if isinstance(node, Num):
		return repr(node.value)
	elif isinstance(node, Var):
		return 'u%d' % node.index
	elif isinstance(node, Neg):
		return '(-%s)' % format_node(node.operand)
	elif isinstance(node, BinOp):
		return '(%s %s %s)' % (format_node(node.left), node.op, format_node(node.right))
	elif isinstance(node, Call):
		return '%s(%s)' % (node.name, ', '.join(format_node(arg) for arg in node.args))
	elif isinstance(node, Vector):
		return '(%s)' % ', '.join(format_node(item) for item in node.items)

	raise TypeError('not an expression node: %r' % (node,))


def _variables(node):
	if isinstance(node, Var):
		yield node
	elif isinstance(node, Neg):
		yield from _variables(node.operand)
	elif isinstance(node, BinOp):
		yield from _variables(node.left)
		yield from _variables(node.right)
	elif isinstance(node, (Call, Vector)):
		for child in (node.args if isinstance(node, Call) else node.items):
			yield from _variables(child)


def _fail(mask, node, what, u):
	if np.any(mask):
		raise ExpressionEvaluationError(what, node.pos, u[np.argmax(mask)])


def _located(values, node, what, u):
	_fail(~np.isfinite(values), node, what, u)
	return values


def evaluate_node(node, u):
	'''Vectorised evaluation over the rows of u; the innermost failing node and its first bad point are reported.'''
	with np.errstate(all='ignore'):
		if isinstance(node, Num):
			return np.full(u.shape[0], node.value)
		elif isinstance(node, Var):
			if node.index > u.shape[1]:
				raise ExpressionEvaluationError('u%d used in dimension %d' % (node.index, u.shape[1]), node.pos)

			return u[:, node.index - 1]
		elif isinstance(node, Neg):
			return -evaluate_node(node.operand, u)
		elif isinstance(node, BinOp):
			left = evaluate_node(node.left, u)
			right = evaluate_node(node.right, u)

			if node.op == '+':
				return _located(left + right, node, 'overflow in addition', u)
			elif node.op == '-':
				return _located(left - right, node, 'overflow in subtraction', u)
			elif node.op == '*':
				return _located(left * right, node, 'overflow in multiplication', u)
			elif node.op == '/':
				_fail(right == 0, node, 'division by zero', u)
				return _located(left / right, node, 'overflow in division', u)
			else:
				return _located(np.power(left, right), node, 'undefined power', u)
		elif isinstance(node, Call):
			args = [evaluate_node(arg, u) for arg in node.args]

			if node.name == 'norm':
				stacked = np.stack(args, axis=1) if args else u
				return _located(np.linalg.norm(stacked, axis=1), node, 'overflow in norm', u)

			if node.name == 'sqrt':
				_fail(args[0] < 0, node, 'sqrt of a negative number', u)

			return _located(UNARY[node.name](args[0]), node, 'overflow in %s' % node.name, u)
		elif isinstance(node, Vector):
			return np.stack([evaluate_node(item, u) for item in node.items], axis=1)

	raise TypeError('not an expression node: %r' % (node,))



@dataclass(frozen=True)
class Expression:
	text: str
	root: object

	@property
	def codim(self):
		return len(self.root.items) if isinstance(self.root, Vector) else 1

	@property
	def is_vector(self):
		return isinstance(self.root, Vector)

	@property
	def dim_required(self):
		return max((var.index for var in _variables(self.root)), default=0)

	def evaluate(self, points):
		return evaluate_node(self.root, as_points(points))

	def __call__(self, point):
		value = self.evaluate(np.atleast_1d(np.asarray(point, dtype=float)).reshape(1, -1))
		return value[0] if self.is_vector else float(value[0])

	def __str__(self):
		return format_node(self.root)

	def to_function(self, dim, label=None):
		for var in _variables(self.root):
			if var.index > dim:
				raise ExpressionEvaluationError('u%d used in dimension %d' % (var.index, dim), var.pos)

		if self.is_vector:
			return VectorFunction(self.codim, self.evaluate, label=label or self.text)

		return ScalarFunction(self.evaluate, label=label or self.text)



def parse_expression(text):
	if isinstance(text, bytes):
		text = text.decode('utf-8')

	try:
		tree = parser.parse(text)
	except UnexpectedToken as error:
		if error.token.type == '$END':
			offset = len(text.encode('utf-8'))
		else:
			offset = len(text[:error.token.start_pos].encode('utf-8'))

		raise ExpressionSyntaxError(text, offset, error.accepts or error.expected)
	except UnexpectedCharacters as error:
		raise ExpressionSyntaxError(text, len(text[:error.pos_in_stream].encode('utf-8')), error.allowed or ())
	except UnexpectedEOF as error:
		raise ExpressionSyntaxError(text, len(text.encode('utf-8')), error.expected)
	except UnexpectedInput as error:
		raise ExpressionSyntaxError(text, len(text[:error.pos_in_stream or 0].encode('utf-8')))

	try:
		root = ASTBuilder(text).transform(tree)
	except VisitError as error:
		raise error.orig_exc

	return Expression(text, root)


def growth_from_expression(text, dim):
	'''User-supplied g with a central-difference gradient.'''
	expression = parse_expression(text)

	if expression.is_vector:
		raise ExpressionSyntaxError(text, 0, expected={'a scalar expression'})

	g = expression.to_function(dim)
	return GrowthFunction(g=expression.evaluate, grad_g=numeric_gradient(expression.evaluate), label=g.label)
