"""Coefficient rings with exact arithmetic.

Five kinds of commutative rings are supported:

* ``Z`` -- the integers,
* ``Z/n`` -- integers modulo ``n``,
* ``GF(p)`` -- the prime field,
* ``GF(p)[x,y,...]`` -- polynomials over ``GF(p)``,
* ``GF(p)[x,y,...]/m^e`` -- polynomials modulo every monomial of total
  degree ``>= e``; a finite local ring with maximal ideal generated by
  the variables.

Elements are plain hashable Python values in canonical form: an ``int``
for the first three kinds and a tuple of ``(exponents, coefficient)``
pairs, sorted by graded-lexicographic monomial order, for the polynomial
kinds. Canonical forms are unique so ``==`` is element equality.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Union

import numpy as np

INTEGERS = "Z"
INTEGERS_MOD = "Z/n"
PRIME_FIELD = "GF"
POLY_RING = "poly"
TRUNCATED = "truncated"

Monomial = tuple[int, ...]
Poly = tuple[tuple[Monomial, int], ...]
Element = Union[int, Poly]


class RingParseError(ValueError):
    """Malformed ring descriptor or element, with the offending position."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        where = f" at position {position}" if text else ""
        super().__init__(f"{message}{where}" + (f": {text!r}" if text else ""))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k`` and ``k >= 1``, else None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        p = n
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def _monomial_key(mono: Monomial) -> tuple:
    # graded lex, first variable largest; storage is ascending
    return (sum(mono), mono)


@dataclass(frozen=True)
class Ring:
    """Descriptor of a supported commutative ring.

    Use :func:`parse_ring` or the constructors :meth:`integers`,
    :meth:`integers_mod`, :meth:`prime_field`, :meth:`poly` and
    :meth:`truncated` rather than building one by hand.
    """

    kind: str
    modulus: int = 0
    variables: tuple[str, ...] = ()
    truncation: int = 0

    def __post_init__(self):
        if self.kind == INTEGERS_MOD and self.modulus < 2:
            raise ValueError(f"Z/n needs n >= 2, got {self.modulus}")
        if self.kind in (PRIME_FIELD, POLY_RING, TRUNCATED) and not is_prime(self.modulus):
            raise ValueError(f"{self.modulus} is not prime")
        if self.kind == TRUNCATED and self.truncation < 2:
            raise ValueError(f"truncation order must be >= 2, got {self.truncation}")
        if self.kind in (POLY_RING, TRUNCATED):
            if not self.variables:
                raise ValueError("polynomial rings need at least one variable")
            if len(set(self.variables)) != len(self.variables):
                raise ValueError(f"repeated variable in {self.variables}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def integers(cls) -> Ring:
        return cls(INTEGERS)

    @classmethod
    def integers_mod(cls, n: int) -> Ring:
        return cls(INTEGERS_MOD, n)

    @classmethod
    def prime_field(cls, p: int) -> Ring:
        return cls(PRIME_FIELD, p)

    @classmethod
    def poly(cls, p: int, variables) -> Ring:
        return cls(POLY_RING, p, tuple(variables))

    @classmethod
    def truncated(cls, p: int, variables, e: int) -> Ring:
        return cls(TRUNCATED, p, tuple(variables), e)

    # -- classification -------------------------------------------------

    def __str__(self) -> str:
        if self.kind == INTEGERS:
            return "Z"
        if self.kind == INTEGERS_MOD:
            return f"Z/{self.modulus}"
        base = f"GF({self.modulus})"
        if self.kind == PRIME_FIELD:
            return base
        base += "[" + ",".join(self.variables) + "]"
        if self.kind == POLY_RING:
            return base
        return f"{base}/m^{self.truncation}"

    @property
    def is_polynomial(self) -> bool:
        return self.kind in (POLY_RING, TRUNCATED)

    @property
    def is_finite(self) -> bool:
        return self.kind in (INTEGERS_MOD, PRIME_FIELD, TRUNCATED)

    @property
    def is_local(self) -> bool:
        if self.kind in (PRIME_FIELD, TRUNCATED):
            return True
        return self.kind == INTEGERS_MOD and prime_power(self.modulus) is not None

    @property
    def prime(self) -> int | None:
        """Characteristic ``p`` when the ring is an algebra over ``GF(p)``."""
        if self.kind in (PRIME_FIELD, POLY_RING, TRUNCATED):
            return self.modulus
        if self.kind == INTEGERS_MOD and is_prime(self.modulus):
            return self.modulus
        return None

    @property
    def is_field(self) -> bool:
        return self.kind == PRIME_FIELD or (self.kind == INTEGERS_MOD and is_prime(self.modulus))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    # -- basic elements -------------------------------------------------

    @cached_property
    def zero(self) -> Element:
        return () if self.is_polynomial else 0

    @cached_property
    def one(self) -> Element:
        return self.from_int(1)

    def from_int(self, n: int) -> Element:
        if self.kind == INTEGERS:
            return int(n)
        if not self.is_polynomial:
            return int(n) % self.modulus
        c = int(n) % self.modulus
        return (((0,) * self.nvars, c),) if c else ()

    def variable(self, name_or_index) -> Poly:
        if not self.is_polynomial:
            raise ValueError(f"{self} has no variables")
        i = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        mono = tuple(1 if k == i else 0 for k in range(self.nvars))
        return self._canon({mono: 1})

    def monomial(self, exps: Monomial, coeff: int = 1) -> Poly:
        return self._canon({tuple(exps): coeff})

    def _canon(self, terms: dict) -> Poly:
        p = self.modulus
        out = []
        for mono, c in terms.items():
            c %= p
            if c == 0:
                continue
            if self.kind == TRUNCATED and sum(mono) >= self.truncation:
                continue
            out.append((mono, c))
        out.sort(key=lambda t: _monomial_key(t[0]))
        return tuple(out)

    def is_canonical(self, a) -> bool:
        if self.kind == INTEGERS:
            return isinstance(a, int)
        if not self.is_polynomial:
            return isinstance(a, int) and 0 <= a < self.modulus
        if not isinstance(a, tuple):
            return False
        try:
            return self._canon(dict(a)) == a and all(len(m) == self.nvars for m, _ in a)
        except (TypeError, ValueError):
            return False

    def check(self, a) -> Element:
        if not self.is_canonical(a):
            raise ValueError(f"{a!r} is not a canonical element of {self}")
        return a

    # -- arithmetic -----------------------------------------------------

    def add(self, a: Element, b: Element) -> Element:
        if not self.is_polynomial:
            return a + b if self.kind == INTEGERS else (a + b) % self.modulus
        terms = dict(a)
        for mono, c in b:
            terms[mono] = terms.get(mono, 0) + c
        return self._canon(terms)

    def neg(self, a: Element) -> Element:
        if not self.is_polynomial:
            return -a if self.kind == INTEGERS else (-a) % self.modulus
        p = self.modulus
        return tuple((m, (-c) % p) for m, c in a)

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def mul(self, a: Element, b: Element) -> Element:
        if not self.is_polynomial:
            return a * b if self.kind == INTEGERS else (a * b) % self.modulus
        if not a or not b:
            return ()
        return _poly_mul(self, a, b)

    def scale(self, c: int, a: Element) -> Element:
        return self.mul(self.from_int(c), a)

    def pow(self, a: Element, k: int) -> Element:
        result = self.one
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def arith(self, op: str, a: Element, b: Element | None = None) -> Element:
        """Dispatch ``add``/``mul``/``neg`` after checking canonical forms."""
        self.check(a)
        if op == "neg":
            return self.neg(a)
        self.check(b)
        if op == "add":
            return self.add(a, b)
        if op == "mul":
            return self.mul(a, b)
        raise ValueError(f"unknown operation {op!r}")

    def is_zero(self, a: Element) -> bool:
        return a == self.zero

    def constant_term(self, a: Element) -> int:
        if not self.is_polynomial:
            return a
        if a and sum(a[0][0]) == 0:
            return a[0][1]
        return 0

    def is_unit(self, a: Element) -> bool:
        return self.try_invert(a) is not None

    def try_invert(self, a: Element) -> Element | None:
        if self.kind == INTEGERS:
            return a if a in (1, -1) else None
        if self.kind in (INTEGERS_MOD, PRIME_FIELD):
            try:
                return pow(a, -1, self.modulus)
            except ValueError:
                return None
        if self.kind == POLY_RING:
            if len(a) == 1 and sum(a[0][0]) == 0:
                return self.from_int(pow(a[0][1], -1, self.modulus))
            return None
        # truncated: a = c(1 - n) with n nilpotent, inverse c^-1 (1 + n + n^2 + ...)
        c = self.constant_term(a)
        if c == 0:
            return None
        cinv = pow(c, -1, self.modulus)
        n = self.sub(self.one, self.scale(cinv, a))
        inv = self.one
        term = self.one
        for _ in range(self.truncation):
            term = self.mul(term, n)
            if not term:
                break
            inv = self.add(inv, term)
        return self.scale(cinv, inv)

    def residue(self, a: Element) -> int:
        """Image of ``a`` in the residue field ``R/m``."""
        if not self.is_local:
            raise ValueError(f"{self} is not a local ring")
        if self.kind == INTEGERS_MOD:
            p, _ = prime_power(self.modulus)
            return a % p
        return self.constant_term(a)

    # -- finite structure -----------------------------------------------

    @cached_property
    def basis(self) -> tuple[Monomial, ...]:
        """Monomial basis over ``GF(p)``; ``((),)`` for the prime field itself."""
        if self.prime is None or self.kind == POLY_RING:
            raise ValueError(f"{self} is not a finite-dimensional GF(p)-algebra")
        if not self.is_polynomial:
            return ((),)
        monos = [m for m in itertools.product(range(self.truncation), repeat=self.nvars)
                 if sum(m) < self.truncation]
        return tuple(sorted(monos, key=_monomial_key))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        if self.kind == INTEGERS_MOD:
            return self.modulus
        return self.modulus ** self.dim

    def coords(self, a: Element) -> list[int]:
        """Coordinates of ``a`` on :attr:`basis`."""
        if not self.is_polynomial:
            return [a % self.modulus]
        index = self._basis_index
        out = [0] * len(index)
        for mono, c in a:
            out[index[mono]] = c
        return out

    def from_coords(self, coords) -> Element:
        if not self.is_polynomial:
            return int(coords[0]) % self.modulus
        return self._canon({m: int(c) for m, c in zip(self.basis, coords) if int(c) % self.modulus})

    @cached_property
    def _basis_index(self) -> dict:
        return {m: i for i, m in enumerate(self.basis)}

    def mult_matrix(self, a: Element) -> np.ndarray:
        """Matrix of multiplication by ``a`` on basis coordinates (column convention)."""
        return _mult_matrix(self, a)

    def elements(self) -> Iterator[Element]:
        """Every element exactly once, in a fixed order."""
        if not self.is_finite:
            raise ValueError(f"{self} is infinite; cannot enumerate elements")
        if self.kind == INTEGERS_MOD:
            yield from range(self.modulus)
            return
        for coords in itertools.product(range(self.modulus), repeat=self.dim):
            yield self.from_coords(coords[::-1])

    @cached_property
    def element_list(self) -> tuple:
        return tuple(self.elements())

    @cached_property
    def unit_list(self) -> tuple:
        return tuple(a for a in self.element_list if self.is_unit(a))

    # -- text -----------------------------------------------------------

    def format(self, a: Element) -> str:
        """Compact text form without spaces, e.g. ``x*y^2+2*x+1``."""
        if not self.is_polynomial:
            return str(a)
        if not a:
            return "0"
        parts = []
        for mono, c in reversed(a):
            factors = []
            for name, e in zip(self.variables, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return "+".join(parts)

    def parse(self, text: str) -> Element:
        return parse_element(self, text)


@lru_cache(maxsize=200_000)
def _poly_mul(ring: Ring, a: Poly, b: Poly) -> Poly:
    terms: dict = {}
    cap = ring.truncation if ring.kind == TRUNCATED else None
    for ma, ca in a:
        da = sum(ma)
        for mb, cb in b:
            if cap is not None and da + sum(mb) >= cap:
                continue
            mono = tuple(x + y for x, y in zip(ma, mb))
            terms[mono] = terms.get(mono, 0) + ca * cb
    return ring._canon(terms)


@lru_cache(maxsize=4096)
def _mult_matrix(ring: Ring, a: Element) -> np.ndarray:
    cols = [ring.coords(ring.mul(a, ring.from_coords(_unit(len(ring.basis), i))))
            for i in range(len(ring.basis))]
    out = np.array(cols, dtype=np.int64).T.reshape(len(ring.basis), len(ring.basis))
    out.setflags(write=False)
    return out


def _unit(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i] = 1
    return v


# -- parsing ------------------------------------------------------------

_RING_RE = re.compile(
    r"""^(?:
        (?P<z>Z)(?:/(?P<n>\d+))?
      | GF\((?P<p>\d+)\)
        (?:\[(?P<vars>[^\]]*)\]
           (?:/m\^(?P<e>\d+))?
        )?
    )$""",
    re.VERBOSE,
)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def parse_ring(text: str) -> Ring:
    """Parse a ring descriptor such as ``Z/6`` or ``GF(2)[x,y]/m^2``."""
    s = text.strip()
    m = _RING_RE.match(s)
    if m is None:
        # report the first position where no grammar alternative can continue
        pos = _descriptor_error_position(s)
        raise RingParseError("malformed ring descriptor", s, pos)
    if m.group("z"):
        if m.group("n") is None:
            return Ring.integers()
        n = int(m.group("n"))
        if n < 2:
            raise RingParseError("Z/n needs n >= 2", s, m.start("n"))
        return Ring.integers_mod(n)
    p = int(m.group("p"))
    if not is_prime(p):
        raise RingParseError(f"{p} is not prime", s, m.start("p"))
    if m.group("vars") is None:
        return Ring.prime_field(p)
    names = [v.strip() for v in m.group("vars").split(",")]
    offset = m.start("vars")
    for name in names:
        if not _IDENT.match(name):
            raise RingParseError(f"bad variable name {name!r}", s, offset)
        offset += len(name) + 1
    if len(set(names)) != len(names):
        raise RingParseError("repeated variable", s, m.start("vars"))
    if m.group("e") is None:
        return Ring.poly(p, names)
    e = int(m.group("e"))
    if e < 2:
        raise RingParseError("truncation order must be >= 2", s, m.start("e"))
    return Ring.truncated(p, names, e)


def _descriptor_error_position(s: str) -> int:
    prefixes = ["Z/", "GF("]
    if s.startswith("Z") and (len(s) == 1 or s[1] == "/"):
        i = 2
        while i < len(s) and s[i].isdigit():
            i += 1
        return i
    for pre in prefixes:
        if s.startswith(pre):
            i = len(pre)
            while i < len(s) and s[i].isdigit():
                i += 1
            if i >= len(s) or s[i] != ")":
                return i
            i += 1
            if i < len(s) and s[i] == "[":
                close = s.find("]", i)
                if close < 0:
                    return len(s)
                i = close + 1
                if s[i:i + 3] != "/m^":
                    return i
                return i + 3
            return i
    return 0


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_element(ring: Ring, text: str) -> Element:
    """Parse ``text`` like ``x*y^2-3*x+1`` into a canonical element of ``ring``."""
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(0).strip() == "":
            continue
        if m.group(1):
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("var", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
    if not tokens:
        raise RingParseError("empty element", text, 0)
    total = ring.zero
    i = 0
    sign = 1
    expect_term = True
    while i < len(tokens):
        kind, val, pos = tokens[i]
        if kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            i += 1
            expect_term = True
            continue
        if not expect_term:
            raise RingParseError("expected '+' or '-'", text, pos)
        term, i = _parse_term(ring, tokens, i, text)
        total = ring.add(total, term if sign > 0 else ring.neg(term))
        sign = 1
        expect_term = False
    if expect_term:
        raise RingParseError("dangling operator", text, len(text))
    return total


def _parse_term(ring: Ring, tokens, i: int, text: str):
    value = ring.one
    while True:
        if i >= len(tokens):
            raise RingParseError("expected a factor", text, len(text))
        kind, val, pos = tokens[i]
        if kind == "int":
            factor = ring.from_int(val)
            i += 1
        elif kind == "var":
            if val not in ring.variables:
                raise RingParseError(f"unknown variable {val!r}", text, pos)
            factor = ring.variable(val)
            i += 1
            if i < len(tokens) and tokens[i][:2] == ("op", "^"):
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "int":
                    raise RingParseError("expected exponent", text, tokens[i][2] + 1)
                factor = ring.pow(factor, tokens[i + 1][1])
                i += 2
        else:
            raise RingParseError(f"unexpected {val!r}", text, pos)
        value = ring.mul(value, factor)
        if i < len(tokens) and tokens[i][:2] == ("op", "*"):
            i += 1
            continue
        return value, i
