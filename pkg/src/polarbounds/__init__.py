"""Universal lower and upper polarization bounds for spherical designs."""
from .bounds import (BoundReport, check_attainment, cell600_bound, cross_polytope_bound, fl_bound,
                     pulb, pulb_negative, puub, simplex_bound)
from .codes import SphericalCode, builtin, dgs_bound, inner_products, moments, s_of_code
from .errors import (DegenerateRuleError, DomainError, NumericFailure, PolarBoundsError,
                     PreconditionError, UnsupportedDegreeError)
from .orthopoly import Polynomial, adjacent, gegenbauer, gegenbauer_coefficients, roots
from .polarization import maximize, minimize, potential_at
from .potentials import gauss, logarithmic, parse_potential, riesz, sampled
from .quadrature import pulb_negative_rule, pulb_rule, puub_rule, signed_basis

__version__ = "0.1.0"
