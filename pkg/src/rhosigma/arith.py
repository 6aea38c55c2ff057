"""Prime sieving, factorization, prime sets and primitive prime divisors."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import ParameterError

# Deterministic Miller-Rabin witnesses for n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 10**6


# ---------------------------
# Primality
# ---------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------
# Sieves
# ---------------------------

def _sieve_flags(limit: int) -> bytearray:
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start::p] = bytes(((limit - start) // p) + 1)
    return flags


def prime_flags(limit: int) -> bytearray:
    """Byte table with ``flags[k] == 1`` iff ``k`` is prime, for ``0 <= k <= limit``."""
    if limit < 1:
        return bytearray(max(limit + 1, 0))
    return _sieve_flags(limit)


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> tuple[int, ...]:
    flags = _sieve_flags(limit)
    return tuple(i for i in range(2, limit + 1) if flags[i])


def sieve_primes(limit: int) -> "PrimeSet":
    """All primes ``<= limit``.

    Raises ParameterError when ``limit < 2`` (the range holds no primes).
    """
    if limit < 2:
        raise ParameterError(f"empty range: sieve limit {limit} < 2")
    return PrimeSet._trusted(_small_primes(limit))


def primes_upto(m: int) -> "PrimeSet":
    """The primes ``<= m``; empty for ``m < 2``."""
    if m < 2:
        return PrimeSet()
    return PrimeSet._trusted(_small_primes(m))


def segmented_primes(lo: int, hi: int, segment: int = 1 << 18) -> Iterator[int]:
    """Yield the primes in ``[lo, hi]`` ascending, sieving one segment at a time."""
    lo = max(lo, 2)
    if hi < lo:
        return
    base = _small_primes(max(math.isqrt(hi), 2))
    start = lo
    while start <= hi:
        stop = min(start + segment - 1, hi)
        flags = bytearray(b"\x01") * (stop - start + 1)
        for p in base:
            if p * p > stop:
                break
            first = max(p * p, (start + p - 1) // p * p)
            if first > stop:
                continue
            flags[first - start::p] = bytes(((stop - first) // p) + 1)
        for i, flag in enumerate(flags):
            if flag:
                yield start + i
        start = stop + 1


# ---------------------------
# PrimeSet
# ---------------------------

class PrimeSet:
    """Immutable finite set of primes kept in ascending order."""

    __slots__ = ("_elems", "_members")

    def __init__(self, elems: Iterable[int] = ()) -> None:
        items = tuple(sorted(set(int(e) for e in elems)))
        for p in items:
            if not is_prime(p):
                raise ParameterError(f"{p} is not prime")
        self._elems = items
        self._members = frozenset(items)

    @classmethod
    def _trusted(cls, sorted_primes: Iterable[int]) -> "PrimeSet":
        obj = cls.__new__(cls)
        obj._elems = tuple(sorted_primes)
        obj._members = frozenset(obj._elems)
        return obj

    @property
    def elems(self) -> tuple[int, ...]:
        return self._elems

    def __iter__(self) -> Iterator[int]:
        return iter(self._elems)

    def __len__(self) -> int:
        return len(self._elems)

    def __contains__(self, p: object) -> bool:
        return p in self._members

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PrimeSet):
            return self._elems == other._elems
        if isinstance(other, (set, frozenset)):
            return self._members == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._elems)

    def __or__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet._trusted(sorted(self._members | other._members))

    def __and__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet._trusted(sorted(self._members & other._members))

    def __sub__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet._trusted(sorted(self._members - other._members))

    def __le__(self, other: "PrimeSet") -> bool:
        return self._members <= other._members

    def isdisjoint(self, other: "PrimeSet") -> bool:
        return self._members.isdisjoint(other._members)

    def __repr__(self) -> str:
        return "PrimeSet({" + ", ".join(map(str, self._elems)) + "})"

    @staticmethod
    def union(sets: Iterable["PrimeSet"]) -> "PrimeSet":
        acc: set[int] = set()
        for s in sets:
            acc |= s._members
        return PrimeSet._trusted(sorted(acc))


# ---------------------------
# Factorization
# ---------------------------

@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> PrimeSet:
        return PrimeSet._trusted(p for p, _ in self.factors)

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split(root, out)
        _split(root, out)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> Factorization:
    """Canonical factorization of ``n >= 1``.

    Trial division by the primes below 10**6 handles everything up to 10**12;
    a cofactor left over after that is split with Pollard-Brent.
    """
    if n < 1:
        raise ParameterError(f"cannot factor {n}")
    found: dict[int, int] = {}
    m = n
    for p in _small_primes(_TRIAL_LIMIT):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT or is_prime(m):
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def pi_set(n: int) -> PrimeSet:
    """The prime divisors of ``n``."""
    return factorize(n).primes()


def pi_geq(n: int, m: int) -> PrimeSet:
    """The prime divisors of ``n`` that are ``>= m``."""
    return PrimeSet._trusted(p for p in pi_set(n) if p >= m)


def prime_power_root(q: int) -> Optional[tuple[int, int]]:
    """Return ``(p, f)`` with ``q == p**f`` and ``p`` prime, or None.

    Exponents are tried from the largest down with exact integer roots.
    """
    if q < 2:
        return None
    for f in range(q.bit_length(), 0, -1):
        p = _iroot(q, f)
        if p >= 2 and p**f == q and is_prime(p):
            return p, f
    return None


def _iroot(n: int, k: int) -> int:
    """Floor of the ``k``-th root of ``n``."""
    if k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


# ---------------------------
# Cyclotomic values and primitive prime divisors
# ---------------------------

def mobius(n: int) -> int:
    mu = 1
    for _, e in factorize(n).factors:
        if e > 1:
            return 0
        mu = -mu
    return mu


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def cyclotomic_value(k: int, q: int) -> int:
    """Exact value of the ``k``-th cyclotomic polynomial at ``q``.

    Uses ``prod_{d | k} (q**d - 1) ** mu(k / d)``; numerator and denominator
    are accumulated separately so the only division is exact.
    """
    if k < 1:
        raise ParameterError(f"cyclotomic index must be >= 1, got {k}")
    if q < 2:
        raise ParameterError(f"cyclotomic argument must be >= 2, got {q}")
    num = den = 1
    for d in divisors(k):
        mu = mobius(k // d)
        if mu == 1:
            num *= q**d - 1
        elif mu == -1:
            den *= q**d - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def _prime_divisors_of_power_minus_one(q: int, n: int) -> list[int]:
    # q**n - 1 is the product of Phi_d(q) over d | n; factoring the pieces
    # keeps every integer handed to factorize() small.
    primes: set[int] = set()
    for d in divisors(n):
        primes.update(pi_set(cyclotomic_value(d, q)))
    return sorted(primes)


def is_primitive_divisor(ell: int, q: int, n: int) -> bool:
    """True iff ``ell`` divides ``q**n - 1`` and no ``q**k - 1`` with ``k < n``."""
    if pow(q, n, ell) != 1:
        return False
    return all(pow(q, k, ell) != 1 for k in range(1, n))


def primitive_prime_divisors(q: int, n: int) -> list[int]:
    """All primitive prime divisors of ``q**n - 1``, ascending."""
    if q < 2 or n < 1:
        raise ParameterError(f"need q >= 2 and n >= 1, got q={q}, n={n}")
    return [ell for ell in _prime_divisors_of_power_minus_one(q, n)
            if is_primitive_divisor(ell, q, n)]


def zsigmondy(q: int, n: int) -> Optional[int]:
    """Smallest primitive prime divisor of ``q**n - 1``, or None if there is none.

    For ``n == 1`` every prime divisor of ``q - 1`` qualifies.
    """
    found = primitive_prime_divisors(q, n)
    return found[0] if found else None
