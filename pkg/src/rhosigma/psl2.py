"""Character degrees of PSL(2, q) for q = p**f with p > 5."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import PrimeSet, pi_set, prime_power_root
from .errors import ParameterError, UnsupportedCharacteristicError


@dataclass(frozen=True)
class Psl2Factor:
    p: int
    f: int
    q: int
    epsilon: int
    degrees: tuple[int, ...]
    profiles: dict[int, PrimeSet] = field(compare=False, hash=False)

    @property
    def label(self) -> str:
        return f"PSL(2,{self.q})"


def make_psl2(q: int) -> Psl2Factor:
    """Build the degree set ``{1, q-1, q, q+1, (q+eps)/2}`` with its prime profiles.

    ``eps`` is +1 when ``q = 1 (mod 4)`` and -1 otherwise.
    """
    root = prime_power_root(q)
    if root is None:
        raise ParameterError(f"{q} is not a prime power")
    p, f = root
    if p <= 5:
        raise UnsupportedCharacteristicError(
            f"PSL(2,{q}) has characteristic {p}; only p > 5 is supported")
    epsilon = 1 if q % 4 == 1 else -1
    degrees = tuple(sorted({1, q - 1, q, q + 1, (q + epsilon) // 2}))
    assert len(degrees) == 5
    profiles = {d: pi_set(d) for d in degrees}
    return Psl2Factor(p, f, q, epsilon, degrees, profiles)


def rho_of_factor(factor: Psl2Factor) -> PrimeSet:
    return PrimeSet.union(factor.profiles.values())


def sigma_of_factor(factor: Psl2Factor) -> int:
    return max(len(s) for s in factor.profiles.values())
