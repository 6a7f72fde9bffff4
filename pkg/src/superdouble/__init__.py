"""Exact graded-Poisson algebra for Courant algebroids and the DFT C-bracket.

Expressions live on a :class:`Chart` (base, doubled or dual) with exact
rational coefficients; brackets are computed as derived brackets of the
canonical graded Poisson structure.
"""
from .algebra import (Chart, ChartMismatchError, Expression, Generator, Monomial, Parity, ParityError,
                      add, mul, normalize, parity_of, partial, partial_right, substitute)
from .algebroid import (BialgebroidData, CourantSection, DualAlgebroidData, FluxData, LieAlgebroidData,
                        build_mu, build_nu, check_bialgebroid, check_courant_axioms, check_proto,
                        courant_bracket, dorfman_derived, jacobiator, lift, so3_lie_poisson, unlift)
from .dft import (DoubleSection, c_bracket, c_bracket_components, circle, d_squared, doubled_chart,
                  gen_lie_scalar, gen_lie_vector, lift_double, mu_dft, project_half, section_of,
                  strong_constraint_pair)
from .expr_io import (IndexRangeError, ParityMisuseError, ParseError, StructureError,
                      UnknownGeneratorError, parse_document, parse_expression, parse_structure,
                      print_expression)
from .genmetric import SingularMetricError, build_generalized_metric, check_odd_compat, eta_form
from .report import VerificationReport
from .symplectic import derived, legendre, legendre_inverse, poisson

__all__ = [name for name in dir() if not name.startswith("_")]
