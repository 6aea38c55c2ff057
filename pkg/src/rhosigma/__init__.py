"""Exact rho and sigma for products of PSL(2, q) and related searches."""

from .arith import PrimeSet, factorize, pi_geq, pi_set, primes_upto, sieve_primes, zsigmondy
from .errors import ParameterError, TooLargeError, UnsupportedCharacteristicError
from .product import GroupSpec, analyze, check_bounds, rho, sigma_bruteforce, sigma_exact
from .psl2 import make_psl2, rho_of_factor, sigma_of_factor

__all__ = [
    "GroupSpec", "ParameterError", "PrimeSet", "TooLargeError", "UnsupportedCharacteristicError",
    "analyze", "check_bounds", "factorize", "make_psl2", "pi_geq", "pi_set", "primes_upto",
    "rho", "rho_of_factor", "sieve_primes", "sigma_bruteforce", "sigma_exact", "sigma_of_factor",
    "zsigmondy",
]
