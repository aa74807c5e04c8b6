"""Exact complex arithmetic: Gaussian rationals and cyclotomic fields Q(zeta_N).

A value is stored either as a Gaussian rational (re, im over Q) or as a
reduced coefficient vector over the power basis of Q(zeta_N).  Construction
canonicalises: cyclotomic vectors are reduced modulo the N-th cyclotomic
polynomial, and any vector that actually lies in Q(i) is downcast to the
Gaussian form.  Equality and hashing are therefore plain structural
comparisons.  Values are immutable.

Two values in different ambient cyclotomic fields compare unequal even when
they denote the same algebraic number; a session fixes one N and sticks to it
(divisor-field literals are embedded upward when parsed).
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import (
    EmptyInput,
    EOError,
    FieldMismatch,
    LiteralSyntaxError,
    SingularSystem,
    ZeroValue,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod(num: list[Fraction], den: list[int]) -> tuple[list[Fraction], list[Fraction]]:
    """Exact division of num by monic integer polynomial den."""
    num = list(num)
    dd = len(den) - 1
    quot = [_ZERO] * max(0, len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        quot[i - dd] = c
        for j, d in enumerate(den):
            num[i - dd + j] -= c * d
    rem = num[:dd]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the n-th cyclotomic polynomial.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    """
    if n < 1:
        raise EOError("cyclotomic index must be positive")
    poly: list[Fraction] = [Fraction(-1)] + [_ZERO] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            quot, rem = _poly_divmod(poly, list(cyclotomic_coeffs(d)))
            if rem:
                raise EOError("cyclotomic division left a remainder")
            poly = quot
    return tuple(int(c) for c in poly)


def _check_ambient(n: int) -> None:
    # Downcast detection of Q(i) values relies on zeta^(N/4) reducing to a
    # monomial, which needs N/4 < phi(N).  First failure is N = 420.
    if n < 1:
        raise EOError("cyclotomic index must be positive")
    if n % 4 == 0 and n // 4 >= euler_phi(n):
        raise EOError(f"unsupported ambient cyclotomic order {n}")


def _reduce_mod_cyclotomic(coeffs: list[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = euler_phi(n)
    _, rem = _poly_divmod(coeffs, list(cyclotomic_coeffs(n)))
    rem = list(rem) + [_ZERO] * (phi - len(rem))
    return tuple(rem)


class ExactValue:
    """An exact complex number: Gaussian rational or cyclotomic."""

    __slots__ = ("_n", "_co")

    _n: int | None
    _co: tuple[Fraction, ...]

    def __init__(self, n: int | None, co: tuple[Fraction, ...]):
        # Internal: use the factory constructors below.
        self._n = n
        self._co = co

    # -- constructors --------------------------------------------------

    @staticmethod
    def gauss(re, im=0) -> ExactValue:
        return ExactValue(None, (Fraction(re), Fraction(im)))

    @staticmethod
    def rational(q) -> ExactValue:
        return ExactValue(None, (Fraction(q), _ZERO))

    @staticmethod
    def zeta(n: int, k: int = 1) -> ExactValue:
        """The root of unity zeta_n^k, canonicalised."""
        _check_ambient(n)
        k %= n
        coeffs = [_ZERO] * (k + 1)
        coeffs[k] = _ONE
        return ExactValue._make_cyclotomic(n, coeffs)

    @staticmethod
    def _make_cyclotomic(n: int, coeffs: list[Fraction]) -> ExactValue:
        _check_ambient(n)
        red = _reduce_mod_cyclotomic(coeffs, n)
        if all(c == 0 for c in red[1:]):
            return ExactValue(None, (red[0], _ZERO))
        if n % 4 == 0:
            q = n // 4  # position of i in the power basis; q < phi(n) by the ambient check
            if all(c == 0 for j, c in enumerate(red) if j not in (0, q)):
                return ExactValue(None, (red[0], red[q]))
        return ExactValue(n, red)

    # -- predicates ----------------------------------------------------

    @property
    def is_gaussian(self) -> bool:
        return self._n is None

    @property
    def ambient(self) -> int | None:
        return self._n

    def is_zero(self) -> bool:
        return self._n is None and self._co[0] == 0 and self._co[1] == 0

    def is_rational(self) -> bool:
        return self._n is None and self._co[1] == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise EOError("value is not rational")
        return self._co[0]

    def gauss_parts(self) -> tuple[Fraction, Fraction]:
        if self._n is not None:
            raise EOError("value is not a Gaussian rational")
        return self._co

    # -- coercion ------------------------------------------------------

    def _embed(self, n: int) -> list[Fraction]:
        """Coefficient vector of self inside Q(zeta_n), length n (unreduced)."""
        out = [_ZERO] * n
        if self._n is None:
            re, im = self._co
            out[0] = re
            if im != 0:
                if n % 4 != 0:
                    raise FieldMismatch(f"i is not contained in Q(zeta_{n})")
                out[n // 4] += im
            return out
        if n % self._n != 0:
            raise FieldMismatch(f"cannot embed Q(zeta_{self._n}) into Q(zeta_{n})")
        step = n // self._n
        for j, c in enumerate(self._co):
            if c != 0:
                out[(j * step) % n] += c
        return out

    @staticmethod
    def _common(a: ExactValue, b: ExactValue) -> int | None:
        if a._n is None and b._n is None:
            return None
        if a._n is None:
            return b._n
        if b._n is None:
            return a._n
        if a._n == b._n:
            return a._n
        if a._n % b._n == 0:
            return a._n
        if b._n % a._n == 0:
            return b._n
        raise FieldMismatch(f"incompatible cyclotomic orders {a._n} and {b._n}")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> ExactValue:
        other = as_value(other)
        n = self._common(self, other)
        if n is None:
            (a, b), (c, d) = self._co, other._co
            return ExactValue(None, (a + c, b + d))
        x, y = self._embed(n), other._embed(n)
        return ExactValue._make_cyclotomic(n, [p + q for p, q in zip(x, y)])

    def __radd__(self, other) -> ExactValue:
        return self.__add__(other)

    def __neg__(self) -> ExactValue:
        if self._n is None:
            return ExactValue(None, (-self._co[0], -self._co[1]))
        return ExactValue(self._n, tuple(-c for c in self._co))

    def __sub__(self, other) -> ExactValue:
        return self.__add__(-as_value(other))

    def __rsub__(self, other) -> ExactValue:
        return (-self).__add__(other)

    def __mul__(self, other) -> ExactValue:
        other = as_value(other)
        n = self._common(self, other)
        if n is None:
            (a, b), (c, d) = self._co, other._co
            return ExactValue(None, (a * c - b * d, a * d + b * c))
        x, y = self._embed(n), other._embed(n)
        prod = [_ZERO] * (2 * n)
        for i, p in enumerate(x):
            if p == 0:
                continue
            for j, q in enumerate(y):
                if q != 0:
                    prod[i + j] += p * q
        return ExactValue._make_cyclotomic(n, prod)

    def __rmul__(self, other) -> ExactValue:
        return self.__mul__(other)

    def inverse(self) -> ExactValue:
        if self.is_zero():
            raise ZeroDivisionError("division by exact zero")
        if self._n is None:
            a, b = self._co
            d = a * a + b * b
            return ExactValue(None, (a / d, -b / d))
        # Extended Euclid against the (irreducible) cyclotomic polynomial.
        phi_poly = [Fraction(c) for c in cyclotomic_coeffs(self._n)]
        r0, r1 = phi_poly, list(self._co)
        while r1 and r1[-1] == 0:
            r1.pop()
        s0: list[Fraction] = []
        s1: list[Fraction] = [_ONE]

        def polsub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
            out = list(a) + [_ZERO] * (len(b) - len(a))
            for i, c in enumerate(b):
                out[i] -= c
            while out and out[-1] == 0:
                out.pop()
            return out

        def polmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
            if not a or not b:
                return []
            out = [_ZERO] * (len(a) + len(b) - 1)
            for i, c in enumerate(a):
                if c == 0:
                    continue
                for j, d in enumerate(b):
                    out[i + j] += c * d
            while out and out[-1] == 0:
                out.pop()
            return out

        while r1:
            # quotient of r0 by r1 over Q
            quot = [_ZERO] * max(1, len(r0) - len(r1) + 1)
            rem = list(r0)
            while rem and len(rem) >= len(r1):
                c = rem[-1] / r1[-1]
                d = len(rem) - len(r1)
                quot[d] += c
                for i, rc in enumerate(r1):
                    rem[d + i] -= c * rc
                while rem and rem[-1] == 0:
                    rem.pop()
            r0, r1 = r1, rem
            s0, s1 = s1, polsub(s0, polmul(quot, s1))
        if len(r0) != 1:
            raise EOError("cyclotomic inverse failed; polynomial not coprime")
        inv = [c / r0[0] for c in s0]
        return ExactValue._make_cyclotomic(self._n, inv)

    def __truediv__(self, other) -> ExactValue:
        return self.__mul__(as_value(other).inverse())

    def __rtruediv__(self, other) -> ExactValue:
        return as_value(other).__mul__(self.inverse())

    def __pow__(self, k: int) -> ExactValue:
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> ExactValue:
        if self._n is None:
            return ExactValue(None, (self._co[0], -self._co[1]))
        n = self._n
        out = [_ZERO] * n
        for j, c in enumerate(self._co):
            out[(n - j) % n] += c
        return ExactValue._make_cyclotomic(n, out)

    def abs2(self) -> ExactValue:
        """x * conj(x); always a real value."""
        return self * self.conj()

    def is_unimodular(self) -> bool:
        return self.abs2() == ONE

    # -- comparisons / hashing ------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = as_value(other)
        if not isinstance(other, ExactValue):
            return NotImplemented
        return self._n == other._n and self._co == other._co

    def __hash__(self) -> int:
        return hash((self._n, self._co))

    def __repr__(self) -> str:
        return f"ExactValue({render_value(self)!r})"

    def __str__(self) -> str:
        return render_value(self)

    # -- numerics --------------------------------------------------------

    def to_mpc(self, dps: int = 30):
        with mpmath.workdps(dps):
            if self._n is None:
                re, im = self._co
                return mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                                  mpmath.mpf(im.numerator) / im.denominator)
            z = mpmath.exp(2j * mpmath.pi / self._n)
            acc = mpmath.mpc(0)
            for j, c in enumerate(self._co):
                if c != 0:
                    acc += (mpmath.mpf(c.numerator) / c.denominator) * z**j
            return acc


ZERO = ExactValue.gauss(0, 0)
ONE = ExactValue.gauss(1, 0)
I = ExactValue.gauss(0, 1)
MINUS_ONE = ExactValue.gauss(-1, 0)


def as_value(x) -> ExactValue:
    if isinstance(x, ExactValue):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactValue.rational(x)
    raise EOError(f"cannot coerce {x!r} to an exact value")


def i_power_exponent(x: ExactValue) -> int | None:
    """Return e with x == i**e for e in 0..3, or None."""
    for e, v in enumerate((ONE, I, MINUS_ONE, ExactValue.gauss(0, -1))):
        if x == v:
            return e
    return None


def compare_abs(a: ExactValue, b: ExactValue) -> int:
    """Exact comparison of |a| and |b|: returns -1, 0 or 1.

    Equality is decided symbolically; a strict inequality between cyclotomic
    magnitudes is separated numerically at increasing precision (sound
    because exact equality has already been excluded).
    """
    d = a.abs2() - b.abs2()
    if d.is_zero():
        return 0
    if d.is_gaussian:
        re, im = d.gauss_parts()
        if im != 0:
            raise EOError("magnitude difference is not real")
        return 1 if re > 0 else -1
    scale = sum(abs(c) for c in d._co) or Fraction(1)
    for dps in (40, 80, 160, 320, 640, 1280):
        val = mpmath.mpf(0)
        with mpmath.workdps(dps):
            val = mpmath.re(d.to_mpc(dps))
            threshold = mpmath.mpf(10) ** (-(dps // 2)) * float(scale)
            if abs(val) > threshold:
                return 1 if val > 0 else -1
    raise EOError("could not separate magnitudes numerically")


# -- root orders -------------------------------------------------------------


@dataclass(frozen=True)
class RootOrder:
    kind: str  # "root" | "not_root" | "unknown"
    order: int | None = None

    @property
    def is_root(self) -> bool:
        return self.kind == "root"


def root_order(x: ExactValue, cap: int = 64) -> RootOrder:
    """Smallest k <= cap with x**k == 1, or the reason there is none.

    Gaussian mode is decisive: the only Gaussian-rational roots of unity are
    1, -1, i, -i.  Cyclotomic mode reports "unknown" for unimodular values
    with no order within the cap.
    """
    if x.is_zero():
        raise ZeroValue("root order of zero is undefined")
    if not x.is_unimodular():
        return RootOrder("not_root")
    if x.is_gaussian:
        if x == ONE:
            return RootOrder("root", 1)
        if x == MINUS_ONE:
            return RootOrder("root", 2)
        if x == I or x == ExactValue.gauss(0, -1):
            return RootOrder("root", 4)
        return RootOrder("not_root")
    power = x
    for k in range(1, cap + 1):
        if power == ONE:
            return RootOrder("root", k)
        power = power * x
    return RootOrder("unknown")


# -- exact Vandermonde solving ------------------------------------------------


def vandermonde_solve(nodes, rhs) -> list[ExactValue]:
    """Coefficients c_0..c_m of the polynomial with sum c_j node_k^j = rhs_k."""
    nodes = [as_value(v) for v in nodes]
    rhs = [as_value(v) for v in rhs]
    if not nodes:
        raise EmptyInput("no interpolation nodes")
    if len(nodes) != len(rhs):
        raise EOError("nodes and right-hand side differ in length")
    m = len(nodes)
    for i in range(m):
        for j in range(i + 1, m):
            if nodes[i] == nodes[j]:
                raise SingularSystem(f"duplicate node {nodes[i]}")
    rows: list[list[ExactValue]] = []
    for k, node in enumerate(nodes):
        row = [ONE]
        for _ in range(m - 1):
            row.append(row[-1] * node)
        row.append(rhs[k])
        rows.append(row)
    # Gaussian elimination with exact division.
    for col in range(m):
        pivot = next((r for r in range(col, m) if not rows[r][col].is_zero()), None)
        if pivot is None:
            raise SingularSystem("coefficient matrix is singular")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [c * inv for c in rows[col]]
        for r in range(m):
            if r != col and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [c - f * d for c, d in zip(rows[r], rows[col])]
    return [rows[k][m] for k in range(m)]


# -- value literals -----------------------------------------------------------


@dataclass(frozen=True)
class FieldMode:
    """Session arithmetic mode: Gaussian rationals or one fixed Q(zeta_N)."""

    kind: str  # "gauss" | "zeta"
    order: int | None = None

    @staticmethod
    def parse(spec: str) -> FieldMode:
        spec = spec.strip().lower()
        if spec == "gauss":
            return FieldMode("gauss")
        if spec.startswith("zeta:"):
            try:
                n = int(spec.split(":", 1)[1])
            except ValueError:
                raise LiteralSyntaxError(f"bad field spec {spec!r}") from None
            _check_ambient(n)
            return FieldMode("zeta", n)
        raise LiteralSyntaxError(f"bad field spec {spec!r}")

    def spec(self) -> str:
        return "gauss" if self.kind == "gauss" else f"zeta:{self.order}"


GAUSS_MODE = FieldMode("gauss")

_TOKEN = _re.compile(r"(\d+(?:/\d+)?|z\d+(?:\^\d+)?|i|[+*-])")
_RAT = _re.compile(r"\A\d+(?:/\d+)?\Z")
_ZLIT = _re.compile(r"\Az(\d+)(?:\^(\d+))?\Z")


def _tokenize(text: str) -> list[str]:
    stripped = "".join(text.split())
    if not stripped:
        raise LiteralSyntaxError("empty value literal")
    pos = 0
    out = []
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            raise LiteralSyntaxError(f"bad value literal {text!r} at {stripped[pos:]!r}")
        out.append(m.group(0))
        pos = m.end()
    return out


def _atom(tok: str, mode: FieldMode) -> ExactValue:
    if tok == "i":
        return I
    m = _ZLIT.match(tok)
    if not m:
        raise LiteralSyntaxError(f"bad term {tok!r}")
    n = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else 1
    if n < 1:
        raise LiteralSyntaxError(f"bad root order in {tok!r}")
    if mode.kind == "zeta":
        if mode.order % n != 0:
            raise LiteralSyntaxError(
                f"literal {tok!r} does not live in the session field Q(zeta_{mode.order})")
        return ExactValue.zeta(mode.order, (mode.order // n) * k)
    val = ExactValue.zeta(n, k)
    if not val.is_gaussian:
        raise LiteralSyntaxError(
            f"literal {tok!r} needs a cyclotomic session field (EO_FIELD=zeta:{n})")
    return val


def parse_value(text: str, mode: FieldMode = GAUSS_MODE) -> ExactValue:
    """Parse a value literal; whitespace-insensitive."""
    toks = _tokenize(text)
    total = ZERO
    sign = 1
    idx = 0
    expect_term = True
    while idx < len(toks):
        tok = toks[idx]
        if tok in "+-":
            if expect_term and tok == "-":
                sign = -sign
                idx += 1
                continue
            if expect_term:
                idx += 1
                continue
            sign = 1 if tok == "+" else -1
            idx += 1
            expect_term = True
            continue
        coeff = _ONE
        atom: ExactValue | None = None
        if _RAT.match(tok):
            coeff = Fraction(tok)
            idx += 1
            if idx < len(toks) and toks[idx] == "*":
                idx += 1
                if idx >= len(toks):
                    raise LiteralSyntaxError(f"dangling '*' in {text!r}")
                atom = _atom(toks[idx], mode)
                idx += 1
            elif idx < len(toks) and toks[idx] not in "+-":
                atom = _atom(toks[idx], mode)
                idx += 1
        else:
            atom = _atom(tok, mode)
            idx += 1
        term = ExactValue.rational(coeff)
        if atom is not None:
            term = term * atom
        total = total + (term if sign > 0 else -term)
        expect_term = False
        sign = 1
    if expect_term:
        raise LiteralSyntaxError(f"trailing operator in {text!r}")
    return total


def render_value(v: ExactValue) -> str:
    """Canonical literal for a value; parse_value(render_value(v)) == v."""
    if v.is_gaussian:
        re, im = v.gauss_parts()
        if im == 0:
            return str(re)
        if re == 0:
            if im == 1:
                return "i"
            if im == -1:
                return "-i"
            return f"{im}i"
        imag = "i" if im == 1 else ("-i" if im == -1 else f"{abs(im)}i")
        if im > 0:
            return f"{re}+{imag}" if im == 1 else f"{re}+{im}i"
        return f"{re}-i" if im == -1 else f"{re}-{abs(im)}i"
    n = v.ambient
    pieces: list[str] = []
    for j, c in enumerate(v._co):
        if c == 0:
            continue
        if j == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = f"z{n}^{j}"
        else:
            body = f"{abs(c)}*z{n}^{j}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces) if pieces else "0"
