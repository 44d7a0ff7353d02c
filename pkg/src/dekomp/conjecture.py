"""Iterate additive functors and study the growth of decomposition numbers.

For a functor ``f`` and a module ``M`` the lab records ``a_n = dn(f^n(M))``,
estimates ``lim log2(a_n) / n`` and looks for a linear recurrence with
constant coefficients, i.e. a rational generating function. Recurrences are
found with Berlekamp-Massey over the rationals on a prefix of the sequence
and must reproduce the held-out tail exactly. A fit is reported as empirical
support only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .decompose import decompose, dn_relative
from .matrix import RingMatrix, direct_sum
from .modules import DEFAULT_BUDGET
from .report import CertificationError

HELDOUT = 5
LAST_K = 3


@dataclass(frozen=True)
class FunctorSpec:
    """One of ``sum`` (direct sum with N), ``power`` (m-fold self sum), ``tensor`` (tensor with N)."""

    kind: str
    N: RingMatrix | None = None
    m: int = 2

    def __post_init__(self):
        if self.kind not in ("sum", "power", "tensor"):
            raise ValueError(f"unknown functor kind {self.kind!r}")
        if self.kind == "power" and self.m < 2:
            raise ValueError("self power needs m >= 2")
        if self.kind in ("sum", "tensor") and self.N is None:
            raise ValueError(f"{self.kind} functor needs a matrix")

    def __str__(self) -> str:
        if self.kind == "power":
            return f"SelfPower({self.m})"
        name = "DirectSumWith" if self.kind == "sum" else "TensorWith"
        return f"{name}({self.N})"


def direct_sum_with(N: RingMatrix) -> FunctorSpec:
    return FunctorSpec("sum", N)


def self_power(m: int) -> FunctorSpec:
    return FunctorSpec("power", m=m)


def tensor_with(N: RingMatrix) -> FunctorSpec:
    return FunctorSpec("tensor", N)


def tensor_presentation(A: RingMatrix, B: RingMatrix) -> RingMatrix:
    """Presentation of ``M_A ⊗ M_B``: generators ``e_j ⊗ f_k``, rows ``A⊗I`` then ``I⊗B``."""
    if A.ring != B.ring:
        raise ValueError("tensor of matrices over different rings")
    ring = A.ring
    va, vb = A.ncols, B.ncols
    rows = []
    for row in A.rows:
        for k in range(vb):
            out = [ring.zero] * (va * vb)
            for j, a in enumerate(row):
                out[j * vb + k] = a
            rows.append(tuple(out))
    for j in range(va):
        for row in B.rows:
            out = [ring.zero] * (va * vb)
            for k, b in enumerate(row):
                out[j * vb + k] = b
            rows.append(tuple(out))
    return RingMatrix(ring, len(rows), va * vb, tuple(rows))


def apply_functor(F: FunctorSpec, A: RingMatrix) -> RingMatrix:
    if F.N is not None and F.N.ring != A.ring:
        raise ValueError(f"functor over {F.N.ring} applied to a matrix over {A.ring}")
    if F.kind == "sum":
        return direct_sum(A, F.N)
    if F.kind == "power":
        return direct_sum(*([A] * F.m))
    return tensor_presentation(A, F.N)


@dataclass
class Sequence:
    terms: list[int]
    truncated: bool = False
    reason: str | None = None


def _count(A: RingMatrix, relative_to: RingMatrix | None, budget: int) -> int:
    if relative_to is None:
        return decompose(A, budget).dn
    return dn_relative(A, relative_to, budget)


def dn_sequence(F: FunctorSpec, A: RingMatrix, terms: int, budget: int = DEFAULT_BUDGET,
                relative_to: RingMatrix | None = None, fast: bool = True) -> Sequence:
    """``dn(f^n(M_A))`` for ``n < terms`` (or the relative count against ``relative_to``).

    Direct sums and self powers use additivity from a single decomposition
    of ``A`` (and of ``N``) unless ``fast`` is False. An exhausted budget
    truncates the sequence and records why.
    """
    out: list[int] = []
    try:
        if fast and F.kind in ("sum", "power"):
            base = _count(A, relative_to, budget)
            step = _count(F.N, relative_to, budget) if F.kind == "sum" else 0
            for n in range(terms):
                out.append(base * F.m ** n if F.kind == "power" else base + n * step)
            return Sequence(out)
        cur = A
        for n in range(terms):
            if n:
                cur = apply_functor(F, cur)
            out.append(_count(cur, relative_to, budget))
    except CertificationError as exc:
        return Sequence(out, True, str(exc))
    return Sequence(out)


# -- recurrences ---------------------------------------------------------------


def berlekamp_massey(seq) -> list[Fraction]:
    """Connection polynomial ``[1, c_1, ..., c_L]`` with ``sum_i c_i a_{n-i} == 0`` for ``n >= L``."""
    a = [Fraction(x) for x in seq]
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(a)):
        d = a[n] + sum(C[i] * a[n - i] for i in range(1, L + 1))
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = C[:]
        C = C + [Fraction(0)] * max(0, len(B) + m - len(C))
        for i, x in enumerate(B):
            C[i + m] -= coef * x
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    C = (C + [Fraction(0)] * (L + 1))[:L + 1]
    return C


def _satisfies(C: list[Fraction], seq) -> bool:
    L = len(C) - 1
    return all(sum(C[i] * seq[n - i] for i in range(L + 1)) == 0 for n in range(L, len(seq)))


def _trim(poly: list[Fraction]) -> list[Fraction]:
    out = list(poly)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


@dataclass
class RationalFit:
    """``a_n = sum_i recurrence[i-1] * a_{n-i}`` and ``sum a_n t^n = numerator / denominator``."""

    recurrence: list[Fraction]
    numerator: list[Fraction]
    denominator: list[Fraction]
    fitted_terms: int
    heldout_terms: int

    @property
    def order(self) -> int:
        return len(self.recurrence)


def rational_fit(seq, heldout: int = HELDOUT) -> RationalFit | None:
    """Fit a minimal recurrence on all but the last ``heldout`` terms and check the rest.

    Needs at least 8 terms; recurrences of order above ``len/2 - 2`` are
    rejected. Returns None when no acceptable recurrence exists.
    """
    seq = [Fraction(x) for x in seq]
    if len(seq) < 8:
        raise ValueError("rational_fit needs at least 8 terms")
    prefix = seq[:len(seq) - heldout]
    C = berlekamp_massey(prefix)
    L = len(C) - 1
    if L > len(seq) // 2 - 2 or not _satisfies(C, seq):
        return None
    num = [sum((C[j] * seq[i - j] for j in range(min(i, L) + 1)), Fraction(0)) for i in range(L)]
    numerator = _trim(num) if num else [Fraction(0)]
    return RationalFit([-c for c in C[1:]], numerator, C, len(prefix), heldout)


def series(fit: RationalFit, terms: int) -> list[Fraction]:
    """Power series coefficients of ``numerator / denominator``."""
    D, N = fit.denominator, fit.numerator
    out: list[Fraction] = []
    for n in range(terms):
        acc = N[n] if n < len(N) else Fraction(0)
        for i in range(1, min(n, len(D) - 1) + 1):
            acc -= D[i] * out[n - i]
        out.append(acc / D[0])
    return out


# -- growth ----------------------------------------------------------------------


def _divisors(n: int, limit: int = 10 ** 6) -> list[int] | None:
    n = abs(n)
    if n == 0 or n > limit:
        return None
    return [d for d in range(1, n + 1) if n % d == 0]


def _rational_roots(coeffs: list[int]) -> list[Fraction] | None:
    """Distinct rational roots of an integer polynomial given highest degree first."""
    lead, const = coeffs[0], coeffs[-1]
    if const == 0:
        return [Fraction(0)] + (_rational_roots(coeffs[:-1]) or [])
    ps, qs = _divisors(const), _divisors(lead)
    if ps is None or qs is None:
        return None
    roots = []
    for p in ps:
        for q in qs:
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and _evaluate(coeffs, cand) == 0:
                    roots.append(cand)
    return roots


def _evaluate(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _deflate(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * root)
    return out


def dominant_root(denominator: list[Fraction]) -> tuple[float, Fraction | None]:
    """Largest modulus root of the characteristic polynomial, exact when rational.

    Rational roots are divided out exactly (with multiplicity) before the
    remaining factor is solved numerically.
    """
    if len(denominator) == 1:
        return 0.0, Fraction(0)
    # characteristic polynomial t^L + c1 t^(L-1) + ... + cL, highest degree first
    scale = math.lcm(*(c.denominator for c in denominator))
    ints = [int(c * scale) for c in denominator]
    rest = [Fraction(c) for c in ints]
    rational: list[Fraction] = []
    for r in _rational_roots(ints) or []:
        while len(rest) > 1 and _evaluate(rest, r) == 0:
            rest = _deflate(rest, r)
            rational.append(r)
    numeric = np.roots(np.array([float(c) for c in rest])) if len(rest) > 1 else []
    rho_num = float(max(abs(r) for r in numeric)) if len(numeric) else -1.0
    best = max((abs(r) for r in rational), default=None)
    if best is not None and float(best) > rho_num + 1e-9:
        return float(best), best
    if best is not None and abs(float(best) - rho_num) <= 1e-9:
        return float(best), None
    return rho_num, None


@dataclass
class GrowthReport:
    functor: str
    sequence: list[int]
    slopes: list[float | None]
    last_k_average: float | None
    exact_limit: float | None
    limit_is_exact: bool
    fit: RationalFit | None
    heldout_verified: bool
    verdict: str
    truncated: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        fit = self.fit
        return {
            "functor": self.functor,
            "sequence": self.sequence,
            "slopes": self.slopes,
            "last_k_average": self.last_k_average,
            "exact_limit": self.exact_limit,
            "limit_is_exact": self.limit_is_exact,
            "recurrence": [_frac(c) for c in fit.recurrence] if fit else None,
            "generating_function": {
                "numerator": [_frac(c) for c in fit.numerator],
                "denominator": [_frac(c) for c in fit.denominator],
            } if fit else None,
            "heldout_verified": self.heldout_verified,
            "verdict": self.verdict,
            "truncated": self.truncated,
            "notes": self.notes,
        }


def _frac(c: Fraction):
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def growth_rate(seq, fit: RationalFit | None = None) -> tuple[list[float | None], float | None,
                                                                float | None, bool, str]:
    """Slopes ``log2(a_n)/n``, their last-3 average, and the limit implied by ``fit``.

    Returns ``(slopes, last_k_average, exact_limit, limit_is_exact, verdict)``.
    """
    seq = list(seq)
    if any(a <= 0 for a in seq):
        return [], None, None, False, "hits zero module"
    slopes: list[float | None] = [None] + [math.log2(a) / n for n, a in enumerate(seq) if n > 0]
    tail = [s for s in slopes if s is not None][-LAST_K:]
    avg = sum(tail) / len(tail) if tail else None
    if fit is None:
        return slopes, avg, None, False, "no recurrence found"
    rho, exact = dominant_root(fit.denominator)
    if exact is not None and exact <= 1:
        return slopes, avg, 0.0, True, "empirical support"
    if exact is None and rho <= 1:
        return slopes, avg, 0.0, False, "empirical support"
    if exact is not None:
        return slopes, avg, math.log2(exact), True, "empirical support"
    return slopes, avg, math.log2(rho), False, "empirical support"


def analyze(seq, functor: str = "", truncated: bool = False) -> GrowthReport:
    seq = [int(a) for a in seq]
    fit = rational_fit(seq) if len(seq) >= 8 else None
    slopes, avg, limit, exact, verdict = growth_rate(seq, fit)
    notes = []
    if len(seq) < 8:
        notes.append("fewer than 8 terms: no recurrence fitted")
    if fit is not None:
        notes.append("a fitted recurrence is empirical support, not a proof")
    return GrowthReport(functor, seq, slopes, avg, limit, exact, fit, fit is not None,
                        verdict, truncated, notes)


def explore(F: FunctorSpec, A: RingMatrix, terms: int = 12, budget: int = DEFAULT_BUDGET,
            relative_to: RingMatrix | None = None, fast: bool = True) -> GrowthReport:
    s = dn_sequence(F, A, terms, budget, relative_to, fast)
    report = analyze(s.terms, str(F), s.truncated)
    if s.reason:
        report.notes.append(f"sequence truncated: {s.reason}")
    return report
