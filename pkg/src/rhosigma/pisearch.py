"""Admissible prime powers, their conflict graph, and compatible-family search.

A prime power q = p**f (p > 5) is admissible when q - 1 and q + 1 each have
exactly one prime divisor outside {2, 3}.  Its reduced spectrum is
{p, r, s} where r and s are those two primes.  A product of PSL(2, q) over a
family of admissible q whose reduced spectra are pairwise disjoint has
|rho| = 3n + 2 and sigma = n + 2.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .arith import PrimeSet, pi_set, prime_flags, prime_power_root
from .errors import ParameterError, TooLargeError
from .product import rho, sigma_exact, spec_from_qs

EXACT_NODE_LIMIT = 40
DEFAULT_VERIFY_CAP = 64


@dataclass(frozen=True)
class AdmissibleQ:
    p: int
    f: int
    q: int
    r: int
    s: int

    @property
    def reduced_spectrum(self) -> PrimeSet:
        return PrimeSet._trusted(sorted((self.p, self.r, self.s)))

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "f": self.f, "r": self.r, "s": self.s}


def _lone_large_prime(primes: PrimeSet) -> Optional[int]:
    rest = [x for x in primes if x > 3]
    return rest[0] if len(rest) == 1 else None


def admissible(q: int) -> Optional[AdmissibleQ]:
    """The admissibility record for ``q``, or None when ``q`` does not qualify."""
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    root = prime_power_root(q)
    if root is None or root[0] <= 5:
        return None
    r = _lone_large_prime(pi_set(q - 1))
    s = _lone_large_prime(pi_set(q + 1))
    if r is None or s is None:
        return None
    return AdmissibleQ(root[0], root[1], q, r, s)


def compatible(a: AdmissibleQ, b: AdmissibleQ) -> bool:
    # 2 and 3 always divide q**2 - 1 here, so meeting exactly in {2, 3}
    # is the same as disjoint reduced spectra.
    return a.reduced_spectrum.isdisjoint(b.reduced_spectrum)


# ---------------------------
# Enumeration
# ---------------------------

def _strip23(m: int) -> int:
    while m % 2 == 0:
        m //= 2
    while m % 3 == 0:
        m //= 3
    return m


def _higher_prime_powers(limit: int, flags: bytearray) -> dict[int, tuple[int, int]]:
    """Map p**f -> (p, f) for primes p >= 5 and f >= 2 with p**f <= limit."""
    out: dict[int, tuple[int, int]] = {}
    for p in range(5, math.isqrt(limit) + 1):
        if flags[p]:
            v, f = p * p, 2
            while v <= limit:
                out[v] = (p, f)
                v *= p
                f += 1
    return out


def enumerate_admissible(limit: int, include_powers: bool = False) -> list[AdmissibleQ]:
    """Every admissible q <= limit, ascending.

    Proper prime powers (f >= 2) are included only with ``include_powers``.
    """
    if limit < 7:
        return []
    flags = prime_flags(limit + 1)
    powers = _higher_prime_powers(limit + 1, flags)

    def base_of(m: int) -> Optional[int]:
        # m has exactly one prime divisor and it is >= 5
        if flags[m]:
            return m if m >= 5 else None
        hit = powers.get(m)
        return hit[0] if hit else None

    candidates: list[tuple[int, int, int]] = [(q, q, 1) for q in range(7, limit + 1) if flags[q]]
    if include_powers:
        for v, (p, f) in powers.items():
            if p > 5 and v <= limit:
                candidates.append((v, p, f))
        candidates.sort()
    found = []
    for q, p, f in candidates:
        r = base_of(_strip23(q - 1))
        if r is None:
            continue
        s = base_of(_strip23(q + 1))
        if s is None:
            continue
        found.append(AdmissibleQ(p, f, q, r, s))
    return found


# ---------------------------
# Conflict graph and family search
# ---------------------------

@dataclass(frozen=True)
class ConflictGraph:
    nodes: tuple[AdmissibleQ, ...]
    adjacency: tuple[frozenset[int], ...]

    @classmethod
    def build(cls, nodes: Sequence[AdmissibleQ]) -> "ConflictGraph":
        ordered = tuple(sorted(nodes, key=lambda a: a.q))
        holders: dict[int, list[int]] = {}
        for i, a in enumerate(ordered):
            for x in a.reduced_spectrum:
                holders.setdefault(x, []).append(i)
        adj: list[set[int]] = [set() for _ in ordered]
        for group in holders.values():
            for i in group:
                adj[i].update(j for j in group if j != i)
        return cls(ordered, tuple(frozenset(a) for a in adj))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]


def _greedy_family(nodes: Sequence[AdmissibleQ]) -> list[AdmissibleQ]:
    used: set[int] = set()
    family = []
    for a in sorted(nodes, key=lambda a: a.q):
        spectrum = (a.p, a.r, a.s)
        if used.isdisjoint(spectrum):
            used.update(spectrum)
            family.append(a)
    return family


def _exact_family(nodes: Sequence[AdmissibleQ]) -> list[AdmissibleQ]:
    graph = ConflictGraph.build(nodes)
    n = len(graph.nodes)
    closed = [(1 << v) | sum(1 << u for u in graph.adjacency[v]) for v in range(n)]
    best: list[int] = []

    def search(chosen: list[int], candidates: int) -> None:
        nonlocal best
        if len(chosen) + candidates.bit_count() <= len(best):
            return
        if not candidates:
            best = list(chosen)
            return
        v = (candidates & -candidates).bit_length() - 1
        chosen.append(v)
        search(chosen, candidates & ~closed[v])
        chosen.pop()
        # an isolated candidate is never worth excluding
        if candidates & closed[v] != 1 << v:
            search(chosen, candidates & ~(1 << v))

    search([], (1 << n) - 1)
    return [graph.nodes[v] for v in best]


def is_compatible_family(family: Iterable[AdmissibleQ]) -> bool:
    seen: set[int] = set()
    for a in family:
        spectrum = set(a.reduced_spectrum)
        if len(spectrum) != 3 or not seen.isdisjoint(spectrum):
            return False
        seen |= spectrum
    return True


def max_compatible_family(nodes: Sequence[AdmissibleQ], mode: str = "greedy") -> list[AdmissibleQ]:
    """A pairwise-compatible subfamily of ``nodes``, sorted by q.

    ``greedy`` keeps each q (ascending) that is compatible with everything
    kept so far.  ``exact`` returns a maximum independent set of the conflict
    graph, the lexicographically first one by q, and refuses more than 40 nodes.
    """
    if mode == "greedy":
        family = _greedy_family(nodes)
    elif mode == "exact":
        if len(nodes) > EXACT_NODE_LIMIT:
            raise TooLargeError(f"exact search is limited to {EXACT_NODE_LIMIT} nodes, got {len(nodes)}")
        family = _exact_family(nodes)
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    if not is_compatible_family(family):
        raise AssertionError("family search returned an incompatible family")
    return family


# ---------------------------
# Ratio curve
# ---------------------------

@dataclass(frozen=True)
class RatioRow:
    n: int
    q: int
    rho: int
    sigma: int
    verified: bool

    @property
    def ratio(self) -> float:
        return self.rho / self.sigma


def ratio_rows(family: Sequence[AdmissibleQ], verify_cap: int = DEFAULT_VERIFY_CAP) -> list[RatioRow]:
    """One row per prefix of ``family``; prefixes up to ``verify_cap`` are recomputed exactly."""
    rows = []
    for n, a in enumerate(family, start=1):
        rho_size, sigma = 3 * n + 2, n + 2
        verified = n <= verify_cap
        if verified:
            spec = spec_from_qs(x.q for x in family[:n])
            got_rho = len(rho(spec))
            got_sigma, _ = sigma_exact(spec)
            if (got_rho, got_sigma) != (rho_size, sigma):
                raise RuntimeError(
                    f"prefix of length {n}: computed |rho|={got_rho}, sigma={got_sigma}; "
                    f"expected {rho_size}, {sigma}")
        rows.append(RatioRow(n, a.q, rho_size, sigma, verified))
    return rows


def ratio_curve(limit: int, include_powers: bool = False,
                verify_cap: int = DEFAULT_VERIFY_CAP) -> list[RatioRow]:
    """Ratio |rho|/sigma along the greedy compatible family of admissible q <= limit."""
    family = max_compatible_family(enumerate_admissible(limit, include_powers), "greedy")
    return ratio_rows(family, verify_cap)


def ratio_csv(rows: Iterable[RatioRow]) -> str:
    buf = io.StringIO()
    buf.write("n,q,rho,sigma,ratio\n")
    for row in rows:
        buf.write(f"{row.n},{row.q},{row.rho},{row.sigma},{row.ratio:.6f}\n")
    return buf.getvalue()
