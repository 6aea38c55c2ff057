"""Two maximal tori per Lie family and the primitive prime divisors they carry.

Each table row stores its torus orders and primitive-divisor indices as
expression strings in ``q``, ``n`` and ``pm`` (the sign of a +/- variant).
They are evaluated exactly over the integers by a small AST walker, so the
data reads the same way as the printed table.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .arith import cyclotomic_value, is_primitive_divisor, prime_power_root, primitive_prime_divisors
from .errors import ParameterError


def cyclotomic(k: int, q: int) -> int:
    """Phi_k(q) computed exactly."""
    return cyclotomic_value(k, q)


# ---------------------------
# Exact expression evaluation
# ---------------------------

def _exact_div(a: int, b: int) -> int:
    value, rem = divmod(a, b)
    if rem:
        raise ArithmeticError(f"{a} / {b} is not an integer")
    return value


def _exact_sqrt(a: int) -> int:
    root = math.isqrt(a)
    if root * root != a:
        raise ArithmeticError(f"{a} is not a perfect square")
    return root


_BINOPS: dict[type, Callable[[int, int], int]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: _exact_div,
    ast.FloorDiv: _exact_div,
    ast.Pow: operator.pow,
}
_FUNCS: dict[str, Callable[..., int]] = {"Phi": lambda k, q: cyclotomic_value(k, q), "sqrt": _exact_sqrt}


def evaluate(expr: str, **env: int) -> int:
    """Evaluate an integer expression; every division and square root must be exact."""

    def walk(node: ast.AST) -> int:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            return _FUNCS[node.func.id](*(walk(a) for a in node.args))
        raise ParameterError(f"unsupported expression element: {ast.dump(node)}")

    return walk(ast.parse(expr, mode="eval"))


# ---------------------------
# Table data
# ---------------------------

@dataclass(frozen=True)
class _Row:
    family: str
    subcase: str
    t1: str
    t2: str
    l1: str
    l2: str
    rank_min: Optional[int] = None  # None: exceptional family, no rank
    rank_filter: Optional[Callable[[int], bool]] = None
    plus_minus: bool = False
    # Divisibility checked and counted as a violation only when asserted.
    l1_asserted: bool = True
    l2_asserted: bool = True


def _mod4(r: int) -> Callable[[int], bool]:
    return lambda n: n % 4 == r


def _odd(n: int) -> bool:
    return n % 2 == 1


def _even(n: int) -> bool:
    return n % 2 == 0


TABLE: tuple[_Row, ...] = (
    _Row("A", "", "(q**(n+1) - 1) / (q - 1)", "q**n - 1", "n + 1", "n", rank_min=1),
    _Row("2A", "n = 0 mod 4", "(q**(n+1) + 1) / (q + 1)", "q**n - 1", "2*n + 2", "n",
         rank_min=2, rank_filter=_mod4(0)),
    _Row("2A", "n = 1 mod 4", "(q**(n+1) - 1) / (q + 1)", "q**n + 1", "(n + 1) / 2", "2*n",
         rank_min=2, rank_filter=_mod4(1), l1_asserted=False),
    _Row("2A", "n = 2 mod 4", "(q**(n+1) + 1) / (q + 1)", "q**n - 1", "2*n + 2", "n / 2",
         rank_min=2, rank_filter=_mod4(2), l2_asserted=False),
    _Row("2A", "n = 3 mod 4", "(q**(n+1) - 1) / (q + 1)", "q**n + 1", "n + 1", "2*n",
         rank_min=2, rank_filter=_mod4(3)),
    _Row("BC", "n >= 3 odd", "q**n + 1", "q**n - 1", "2*n", "n", rank_min=3, rank_filter=_odd),
    _Row("BC", "n >= 2 even", "q**n + 1", "(q**(n-1) + 1) * (q + 1)", "2*n", "2*n - 2",
         rank_min=2, rank_filter=_even),
    _Row("D", "n >= 5 odd", "(q**(n-1) + 1) * (q + 1)", "q**n - 1", "2*n - 2", "n",
         rank_min=5, rank_filter=_odd),
    _Row("D", "n >= 4 even", "(q**(n-1) + 1) * (q + 1)", "(q**(n-1) - 1) * (q - 1)", "2*n - 2", "n - 1",
         rank_min=4, rank_filter=_even),
    _Row("2D", "", "q**n + 1", "(q**(n-1) + 1) * (q - 1)", "2*n", "2*n - 2", rank_min=4),
    _Row("2B2", "", "q + pm*sqrt(2*q) + 1", "q - 1", "4", "1", plus_minus=True),
    _Row("2G2", "", "q + pm*sqrt(3*q) + 1", "q - 1", "6", "1", plus_minus=True),
    _Row("2F4", "", "q**2 + q + 1 + pm*(sqrt(2*q**3) + sqrt(2*q))", "q**2 - q + 1", "12", "6",
         plus_minus=True),
    _Row("3D4", "", "q**4 - q**2 + 1", "(q**3 + 1) * (q + 1)", "12", "6"),
    _Row("G2", "", "Phi(6, q)", "Phi(3, q)", "6", "3"),
    _Row("F4", "", "Phi(12, q)", "Phi(8, q)", "12", "8"),
    _Row("E8", "", "Phi(30, q)", "Phi(24, q)", "30", "24"),
    _Row("E6", "", "Phi(9, q)", "Phi(12, q) * Phi(3, q)", "9", "12"),
    _Row("2E6", "", "Phi(18, q)", "Phi(12, q) * Phi(6, q)", "18", "12"),
    _Row("E7", "", "Phi(18, q) * Phi(2, q)", "Phi(14, q) * Phi(2, q)", "18", "14"),
)

FAMILY_ALIASES = {"B": "BC", "C": "BC"}
FAMILIES = tuple(dict.fromkeys(row.family for row in TABLE))
RANKED_FAMILIES = tuple(f for f in FAMILIES if any(r.family == f and r.rank_min for r in TABLE))

# (base prime, q must be base**(2m+1) with m >= 1)
_TWISTED_SHAPE = {"2B2": 2, "2G2": 3, "2F4": 2}


@dataclass(frozen=True)
class ToriRow:
    family: str
    subcase: str
    n: Optional[int]
    q: int
    sign: Optional[int]
    t1: int
    t2: int
    l1_index: int
    l2_index: int
    l1: Optional[int]
    l2: Optional[int]
    l1_asserted: bool = True
    l2_asserted: bool = True

    @property
    def l1_divides(self) -> Optional[bool]:
        return None if self.l1 is None else self.t1 % self.l1 == 0

    @property
    def l2_divides(self) -> Optional[bool]:
        return None if self.l2 is None else self.t2 % self.l2 == 0

    def to_json(self) -> dict:
        return {
            "family": self.family, "n": self.n, "q": self.q,
            "t1": self.t1, "t2": self.t2, "l1": self.l1, "l2": self.l2,
            "l1_divides": bool(self.l1_divides), "l2_divides": bool(self.l2_divides),
        }


def _pick_divisor(q: int, index: int, torus: int) -> Optional[int]:
    # The table promises a primitive divisor inside the torus; when several
    # exist (e.g. the two Suzuki tori split q**2 + 1) take the smallest one
    # that lands there.
    candidates = primitive_prime_divisors(q, index)
    if not candidates:
        return None
    for ell in candidates:
        if torus % ell == 0:
            return ell
    return candidates[0]


def _check_q(family: str, q: int) -> None:
    root = prime_power_root(q)
    if root is None:
        raise ParameterError(f"q = {q} is not a prime power")
    if family in _TWISTED_SHAPE:
        base = _TWISTED_SHAPE[family]
        p, f = root
        if p != base or f % 2 == 0 or f < 3:
            raise ParameterError(f"{family} needs q = {base}**(2m+1) with m >= 1, got {q}")


def resolve_family(family: str) -> str:
    fam = FAMILY_ALIASES.get(family, family)
    if fam not in FAMILIES:
        raise ParameterError(f"unknown Lie family {family!r}")
    return fam


def tori_row(family: str, n: Optional[int], q: int) -> list[ToriRow]:
    """Evaluate the table row(s) of ``family`` at rank ``n`` and field size ``q``.

    +/- families give two rows (sign +1 first).  Raises ParameterError for a
    rank outside the printed range or a q of the wrong shape.
    """
    fam = resolve_family(family)
    _check_q(fam, q)
    rows = [r for r in TABLE if r.family == fam]
    if rows[0].rank_min is None:
        if n is not None:
            raise ParameterError(f"{fam} takes no rank")
        row = rows[0]
    else:
        if n is None:
            raise ParameterError(f"{fam} needs a rank")
        matching = [r for r in rows if (r.rank_filter is None or r.rank_filter(n)) and n >= r.rank_min]
        if not matching:
            raise ParameterError(f"rank {n} is outside the table's range for {fam}")
        row = matching[0]
    out = []
    for sign in ((1, -1) if row.plus_minus else (None,)):
        env = {"q": q, "pm": sign if sign is not None else 0}
        if n is not None:
            env["n"] = n
        t1 = evaluate(row.t1, **env)
        t2 = evaluate(row.t2, **env)
        k1 = evaluate(row.l1, **env)
        k2 = evaluate(row.l2, **env)
        out.append(ToriRow(fam, row.subcase, n, q, sign, t1, t2, k1, k2,
                           _pick_divisor(q, k1, t1), _pick_divisor(q, k2, t2),
                           row.l1_asserted, row.l2_asserted))
    return out


# ---------------------------
# Whole-table verification
# ---------------------------

@dataclass
class VerificationReport:
    rows: list[ToriRow]

    @property
    def violations(self) -> list[tuple[ToriRow, int]]:
        """(row, torus number) where a present, asserted divisor misses its torus."""
        bad = []
        for row in self.rows:
            if row.l1 is not None and row.l1_asserted and not row.l1_divides:
                bad.append((row, 1))
            if row.l2 is not None and row.l2_asserted and not row.l2_divides:
                bad.append((row, 2))
        return bad

    @property
    def unasserted_misses(self) -> list[tuple[ToriRow, int]]:
        bad = []
        for row in self.rows:
            if row.l1 is not None and not row.l1_asserted and not row.l1_divides:
                bad.append((row, 1))
            if row.l2 is not None and not row.l2_asserted and not row.l2_divides:
                bad.append((row, 2))
        return bad

    @property
    def zsigmondy_failures(self) -> list[tuple[ToriRow, int]]:
        out = []
        for row in self.rows:
            if row.l1 is None:
                out.append((row, 1))
            if row.l2 is None:
                out.append((row, 2))
        return out

    def primitivity_ok(self) -> bool:
        return all((row.l1 is None or is_primitive_divisor(row.l1, row.q, row.l1_index))
                   and (row.l2 is None or is_primitive_divisor(row.l2, row.q, row.l2_index))
                   for row in self.rows)

    def to_json(self) -> list[dict]:
        return [row.to_json() for row in self.rows]


def _shape_ok(family: str, q: int) -> bool:
    try:
        _check_q(family, q)
    except ParameterError:
        return False
    return True


def verify_table(q_list: Iterable[int], rank_cap: int) -> VerificationReport:
    """Evaluate every row for every q in ``q_list`` and rank up to ``rank_cap``.

    Suzuki and Ree families only use the members of ``q_list`` with the
    right shape.  Failures are collected in the report, never raised.
    """
    qs = sorted(set(q_list))
    rows: list[ToriRow] = []
    for fam in FAMILIES:
        first = next(r for r in TABLE if r.family == fam)
        for q in qs:
            if not _shape_ok(fam, q):
                continue
            if first.rank_min is None:
                rows.extend(tori_row(fam, None, q))
                continue
            lowest = min(r.rank_min for r in TABLE if r.family == fam)
            for n in range(lowest, rank_cap + 1):
                try:
                    rows.extend(tori_row(fam, n, q))
                except ParameterError:
                    continue
    return VerificationReport(rows)
