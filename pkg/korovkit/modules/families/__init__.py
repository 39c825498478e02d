from .family import MeasureFamily, freeze_atoms
from .classical import *
from .transforms import *
from ...errors import ConfigurationError


def pick_family(name):
	if name == 'bernstein':
		return make_bernstein
	elif name == 'szasz':
		return make_szasz
	elif name == 'gauss_weierstrass':
		return make_gauss_weierstrass
	else:
		raise ConfigurationError('operator family "%s" does not exist' % name)
