"""Degenerate generalized Laguerre polynomials, Lah numbers and the degenerate Poisson law."""

from .errors import DomainError
from .exact_core import MultiPoly, TruncSeries, binom_poly, poly_eval
from .laguerre import explicit, gf_expand, theorem4_poly
from .special import deg_exp_eval, deg_exp_series, falling_lambda, lah

__all__ = [
    "DomainError",
    "MultiPoly",
    "TruncSeries",
    "binom_poly",
    "poly_eval",
    "explicit",
    "gf_expand",
    "theorem4_poly",
    "deg_exp_eval",
    "deg_exp_series",
    "falling_lambda",
    "lah",
]

__version__ = "0.1.0"
