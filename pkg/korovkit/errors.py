EXIT_OK = 0
EXIT_VERDICT = 2
EXIT_CONFIG = 64
EXIT_GROWTH = 65


class KorovkitError(Exception):
	exit_code = EXIT_CONFIG


class InputError(KorovkitError, ValueError):
	pass


class DomainError(KorovkitError, ValueError):
	pass


class ModeError(KorovkitError):
	pass


class ConfigurationError(KorovkitError):
	pass


class InsufficientDataError(KorovkitError):
	pass


class EvaluationError(KorovkitError):
	def __init__(self, message, node=None):
		super().__init__(message)
		self.node = node


class FamilyParseError(KorovkitError):
	def __init__(self, message, line=None):
		if line is not None:
			message = 'line %d: %s' % (line, message)

		super().__init__(message)
		self.line = line


class ExpressionSyntaxError(KorovkitError):
	def __init__(self, text, offset, expected=()):
		self.text = text
		self.offset = offset
		self.expected = frozenset(expected)

		message = 'syntax error at offset %d' % offset

		if self.expected:
			message += ' (expected one of: %s)' % ', '.join(sorted(self.expected))

		super().__init__(message)


class ExpressionEvaluationError(EvaluationError):
	def __init__(self, message, offset, node=None):
		if node is not None:
			message = '%s at node %s' % (message, [float(x) for x in node])

		super().__init__('%s, offset %d' % (message, offset), node=node)
		self.offset = offset


class GrowthViolation(KorovkitError):
	exit_code = EXIT_GROWTH

	def __init__(self, message, witness=None, ratio=None):
		super().__init__(message)
		self.witness = witness
		self.ratio = ratio


class TruncationError(KorovkitError):
	exit_code = EXIT_GROWTH
