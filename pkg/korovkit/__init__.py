from .interfaces import Box, Domain, ScalarFunction, VectorFunction, GrowthFunction, WeakNeighborhood, OperatorPair, BoundReport, GrowthConstant, CheckReport
from .core import psi_sq, bregman_gap, sublevel_member, modulus_of_continuity, weak_modulus, shrink_neighborhood, truncation_radius, sampling_lattice, growth_ratio
from .operators import apply_S, apply_L, gamma_sq, apply_S_h, check_domination, check_regularity, check_constants, check_positivity
from .operators import make_bernstein, make_szasz, make_gauss_weierstrass, make_tensor, load_family, save_family
from .bounds import shisha_mond_bound, uniform_bound, estimate_M, growth_bound, growth_bound_forms, measured_error, domination_bound, neighborhood_bound, estimate_neighborhood_M
from .korovkin import check_statement_a, check_statement_b, check_statement_c, check_corollary, equivalence_harness, rate_fit, default_battery
from .modules.growth import quadratic_growth, gaussian_growth, validate_growth
from .modules.expression import parse_expression
from .context import progress_tracking
from .loader import unload_all
