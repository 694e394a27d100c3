"""Exact integer polynomials in one and two variables, plus a complex-float polynomial.

Integer polynomials keep Python ints throughout (coefficients of discriminants
grow quickly); only evaluation and specialization drop to complex doubles.

Coefficient conventions: index == power.  ``IntBiPoly.coeffs[j][k]`` is the
coefficient of ``x**j * y**k``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BadSpec, DegenerateLeading, NotSquarefreeGenerically

DEGENERATE_FLOOR = 1e-12


# --------------------------------------------------------------------------
# dense integer coefficient lists (low level, index == power)
# --------------------------------------------------------------------------

def _trim(c: Sequence[int]) -> list[int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _add(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return _trim(out)


def _neg(a):
    return [-v for v in a]


def _sub(a, b):
    return _add(a, _neg(b))


def _mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return _trim(out)


def _divexact(a, b):
    """Quotient of a by b, both in Z[x]; raises if the division is not exact."""
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    lb = b[-1]
    db = len(b) - 1
    rem = list(a)
    q = [0] * (len(a) - db) if len(a) > db else []
    for i in range(len(a) - 1 - db, -1, -1):
        top = rem[i + db]
        if top == 0:
            continue
        qi, r = divmod(top, lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[i] = qi
        for j, v in enumerate(b):
            rem[i + j] -= qi * v
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _content(a) -> int:
    from math import gcd

    g = 0
    for v in a:
        g = gcd(g, v)
    return g


def _primitive(a):
    a = _trim(a)
    if not a:
        return []
    g = _content(a)
    if a[-1] < 0:
        g = -g
    return [v // g for v in a]


def _deriv(a):
    return _trim([i * a[i] for i in range(1, len(a))])


def _prem(a, b):
    """Pseudo-remainder of a by b."""
    a = _trim(a)
    b = _trim(b)
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        top = r[-1]
        r = [lb * v for v in r]
        for j, v in enumerate(b):
            r[shift + j] -= top * v
        r = _trim(r)
    return r


def _gcd(a, b):
    """Primitive gcd in Z[x] via the primitive polynomial remainder sequence."""
    a = _primitive(a)
    b = _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _primitive(_prem(a, b))
        a, b = b, r
    return a


# --------------------------------------------------------------------------
# public types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPoly:
    """Univariate integer polynomial; ``coeffs[i]`` multiplies ``x**i``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(v) for v in _trim(self.coeffs)))

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        return np.polyval(np.array(self.coeffs[::-1], dtype=complex), x) if self.coeffs else 0 * x

    def __add__(self, other):
        return IntPoly(_add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return IntPoly(_sub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([other * v for v in self.coeffs])
        return IntPoly(_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return IntPoly(_neg(self.coeffs))

    def exact_div(self, other: IntPoly) -> IntPoly:
        return IntPoly(_divexact(self.coeffs, other.coeffs))

    def derivative(self) -> IntPoly:
        return IntPoly(_deriv(self.coeffs))

    def content(self) -> int:
        return _content(self.coeffs)

    def primitive(self) -> IntPoly:
        """Divide out the content and make the leading coefficient positive."""
        return IntPoly(_primitive(self.coeffs))

    def squarefree_part(self) -> IntPoly:
        f = self.primitive()
        if f.deg < 1:
            return f
        g = _gcd(f.coeffs, _deriv(f.coeffs))
        return IntPoly(_divexact(f.coeffs, g)).primitive()

    def to_cpoly(self) -> CPoly:
        # scale before converting so huge integers do not overflow doubles
        big = max(abs(v) for v in self.coeffs)
        return CPoly(np.array([v / big for v in self.coeffs], dtype=complex))

    def __str__(self):
        return _format_terms({(i, 0): c for i, c in enumerate(self.coeffs)})


@dataclass(frozen=True)
class IntBiPoly:
    """Bivariate integer polynomial; ``coeffs[j][k]`` multiplies ``x**j * y**k``.

    The matrix is trimmed so the last row and last column are not all zero.
    """

    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = [list(map(int, r)) for r in self.coeffs]
        width = max((len(r) for r in rows), default=0)
        rows = [r + [0] * (width - len(r)) for r in rows]
        while rows and not any(rows[-1]):
            rows.pop()
        while rows and rows[0] and not any(r[-1] for r in rows):
            rows = [r[:-1] for r in rows]
        object.__setattr__(self, "coeffs", tuple(tuple(r) for r in rows))

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], int]) -> IntBiPoly:
        """Build from ``{(x_power, y_power): coefficient}``."""
        if not terms:
            return cls(())
        dx = max(j for j, _ in terms)
        dy = max(k for _, k in terms)
        m = [[0] * (dy + 1) for _ in range(dx + 1)]
        for (j, k), c in terms.items():
            if j < 0 or k < 0:
                raise BadSpec(f"negative exponent in term x^{j} y^{k}")
            m[j][k] += c
        return cls(m)

    @classmethod
    def from_rows_in_y(cls, rows: Sequence[Sequence[int]]) -> IntBiPoly:
        """Build from ``rows[k][j]`` = coefficient of ``x**j y**k``."""
        if not rows:
            return cls(())
        width = max(len(r) for r in rows)
        padded = [list(r) + [0] * (width - len(r)) for r in rows]
        return cls(tuple(zip(*padded)))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg_x(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg_y(self) -> int:
        return len(self.coeffs[0]) - 1 if self.coeffs else -1

    def terms(self) -> dict[tuple[int, int], int]:
        return {(j, k): c for j, row in enumerate(self.coeffs) for k, c in enumerate(row) if c}

    def y_coeff(self, k: int) -> IntPoly:
        """The coefficient a_k(x) of y**k."""
        return IntPoly([row[k] for row in self.coeffs])

    @property
    def leading_y(self) -> IntPoly:
        return self.y_coeff(self.deg_y)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Complex coefficient matrix, shape (deg_x + 1, deg_y + 1)."""
        return np.array(self.coeffs, dtype=complex).reshape(self.deg_x + 1, self.deg_y + 1)

    def y_coeffs_at(self, x) -> np.ndarray:
        """Coefficients in y of P(x, y) for an array of x values; shape x.shape + (g + 1,)."""
        x = np.asarray(x, dtype=complex)
        out = np.zeros(x.shape + (self.deg_y + 1,), dtype=complex)
        for row in self.matrix[::-1]:
            out = out * x[..., None] + row
        return out

    def __call__(self, x, y):
        c = self.y_coeffs_at(np.broadcast_to(np.asarray(x, dtype=complex), np.broadcast(x, y).shape))
        y = np.asarray(y, dtype=complex)
        acc = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for k in range(self.deg_y, -1, -1):
            acc = acc * y + c[..., k]
        return acc

    def __str__(self):
        return _format_terms(self.terms())


@dataclass(eq=False)
class CPoly:
    """Dense complex polynomial; ``coeffs[i]`` multiplies ``x**i``. Trimmed on construction."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        nz = np.nonzero(c)[0]
        self.coeffs = c[: nz[-1] + 1].copy() if nz.size else c[:0].copy()

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polyval(self.coeffs[::-1], x)

    def derivative(self) -> CPoly:
        return CPoly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def __mul__(self, other):
        if isinstance(other, CPoly):
            return CPoly(np.convolve(self.coeffs, other.coeffs))
        return CPoly(self.coeffs * other)

    __rmul__ = __mul__

    @classmethod
    def from_roots(cls, roots, lead=1.0) -> CPoly:
        return cls(lead * np.poly(np.asarray(roots, dtype=complex))[::-1])


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def substitute_y_xn(P: IntBiPoly, n: int) -> IntPoly:
    """P(x, x**n) as an exact integer polynomial (colliding monomials are summed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [0] * (P.deg_x + n * P.deg_y + 1)
    for (j, k), c in P.terms().items():
        out[j + n * k] += c
    return IntPoly(out)


def invert(P: IntBiPoly) -> IntBiPoly:
    """Swap x and y (transpose the coefficient matrix)."""
    return IntBiPoly(tuple(zip(*P.coeffs)))


def partial_x(P: IntBiPoly) -> IntBiPoly:
    return IntBiPoly.from_terms({(j - 1, k): j * c for (j, k), c in P.terms().items() if j})


def partial_y(P: IntBiPoly) -> IntBiPoly:
    return IntBiPoly.from_terms({(j, k - 1): k * c for (j, k), c in P.terms().items() if k})


def specialize_x(P: IntBiPoly, x0: complex, floor: float = DEGENERATE_FLOOR) -> CPoly:
    """P(x0, y) as a polynomial in y.

    Raises DegenerateLeading (with the trimmed polynomial attached) when
    ``|a_g(x0)| <= floor``.
    """
    c = P.y_coeffs_at(complex(x0))
    poly = CPoly(c)
    if abs(c[-1]) <= floor:
        raise DegenerateLeading(x0, c[-1], poly)
    return poly


def is_reciprocal(p: IntPoly) -> bool:
    """True iff the coefficient vector is a palindrome, i.e. p(x) = x^d p(1/x)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    return p.coeffs == p.coeffs[::-1]


def strip_monomial(P: IntBiPoly) -> IntBiPoly:
    """Divide out the largest monomial x^a y^b dividing P."""
    t = P.terms()
    if not t:
        return P
    a = min(j for j, _ in t)
    b = min(k for _, k in t)
    return IntBiPoly.from_terms({(j - a, k - b): c for (j, k), c in t.items()})


def reciprocity_sign(P: IntBiPoly) -> int:
    """+1 / -1 if P (monomial factors removed) satisfies P = ±x^D y^g P(1/x, 1/y), else 0."""
    Q = strip_monomial(P)
    m = Q.coeffs
    flipped = tuple(tuple(r[::-1]) for r in m[::-1])
    if flipped == m:
        return 1
    if flipped == tuple(tuple(-v for v in r) for r in m):
        return -1
    return 0


def is_bi_reciprocal(P: IntBiPoly) -> bool:
    """Central symmetry (up to sign) of the coefficient matrix, after removing monomial factors."""
    return reciprocity_sign(P) != 0


def sylvester_matrix(f: Sequence[IntPoly], h: Sequence[IntPoly]) -> list[list[list[int]]]:
    """Sylvester matrix of two polynomials in y whose coefficients (index == power) are IntPolys."""
    m = len(f) - 1
    n = len(h) - 1
    size = m + n
    fr = [c.coeffs for c in reversed(f)]
    hr = [c.coeffs for c in reversed(h)]
    rows = []
    for i in range(n):
        rows.append([[]] * i + [list(c) for c in fr] + [[]] * (size - m - 1 - i))
    for i in range(m):
        rows.append([[]] * i + [list(c) for c in hr] + [[]] * (size - n - 1 - i))
    return rows


def bareiss_det(M: list[list[list[int]]]) -> IntPoly:
    """Fraction-free determinant of a square matrix over Z[x]."""
    M = [[list(e) for e in row] for row in M]
    n = len(M)
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return IntPoly(())
        piv = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            for j in range(k + 1, n):
                num = _sub(_mul(piv, M[i][j]), _mul(mik, M[k][j]))
                M[i][j] = _divexact(num, prev) if num else []
            M[i][k] = []
        prev = piv
    det = M[n - 1][n - 1]
    return IntPoly(det if sign > 0 else _neg(det))


def resultant_y(P: IntBiPoly, Q: IntBiPoly) -> IntPoly:
    f = [P.y_coeff(k) for k in range(P.deg_y + 1)]
    h = [Q.y_coeff(k) for k in range(Q.deg_y + 1)]
    return bareiss_det(sylvester_matrix(f, h))


def disc_cost(P: IntBiPoly) -> int:
    """Rough count of big-integer digit operations needed by disc_y."""
    n = 2 * P.deg_y - 1
    width = n * max(P.deg_x, 1) + 1
    return n ** 3 * width ** 2 // 3


def disc_y(P: IntBiPoly) -> IntPoly:
    """Discriminant of P with respect to y, as an exact polynomial in x.

    Computed as (-1)^(g(g-1)/2) res_y(P, dP/dy) / a_g(x).
    """
    g = P.deg_y
    if g < 1:
        raise ValueError("disc_y needs deg_y >= 1")
    if g == 1:
        return IntPoly((1,))
    res = resultant_y(P, partial_y(P))
    if res.is_zero():
        raise NotSquarefreeGenerically("discriminant vanishes identically")
    d = res.exact_div(P.leading_y)
    return -d if (g * (g - 1) // 2) % 2 else d


def same_up_to_unit(a: IntPoly, b: IntPoly) -> bool:
    """Equality after removing integer content and sign."""
    return a.primitive() == b.primitive()


# --------------------------------------------------------------------------
# text and JSON formats
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|(\^)|(\*)|([+-]))")


def parse_poly(text: str) -> IntBiPoly:
    """Parse ``1+y+x*y+x*y^2-3x^2y^4`` style text into an IntBiPoly."""
    s = text.replace("−", "-").strip()
    if not s:
        raise BadSpec("empty polynomial")
    pos = 0
    tokens = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise BadSpec(f"unexpected character {s[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("var", m.group(2)))
        elif m.group(3):
            tokens.append(("pow", None))
        elif m.group(4):
            tokens.append(("mul", None))
        elif m.group(5):
            tokens.append(("sign", m.group(5)))

    terms: dict[tuple[int, int], int] = {}
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "sign":
            sign *= -1 if tokens[i][1] == "-" else 1
            i += 1
        coeff, ex, ey, seen = 1, 0, 0, False
        while i < len(tokens) and tokens[i][0] != "sign":
            kind, val = tokens[i]
            if kind == "mul":
                i += 1
                continue
            if kind == "int":
                coeff *= val
            elif kind == "var":
                e = 1
                if i + 1 < len(tokens) and tokens[i + 1][0] == "pow":
                    if i + 2 >= len(tokens) or tokens[i + 2][0] != "int":
                        raise BadSpec(f"exponent expected after '^' in {text!r}")
                    e = tokens[i + 2][1]
                    i += 2
                if val == "x":
                    ex += e
                else:
                    ey += e
            else:
                raise BadSpec(f"misplaced '^' in {text!r}")
            seen = True
            i += 1
        if not seen:
            raise BadSpec(f"dangling sign in {text!r}")
        terms[(ex, ey)] = terms.get((ex, ey), 0) + sign * coeff
    return IntBiPoly.from_terms(terms)


def _format_terms(terms: dict[tuple[int, int], int]) -> str:
    parts = []
    for (j, k), c in sorted(terms.items(), key=lambda t: (t[0][1], t[0][0])):
        if not c:
            continue
        mono = []
        if j:
            mono.append("x" if j == 1 else f"x^{j}")
        if k:
            mono.append("y" if k == 1 else f"y^{k}")
        body = "*".join(mono)
        mag = abs(c)
        if body:
            body = body if mag == 1 else f"{mag}*{body}"
        else:
            body = str(mag)
        parts.append(("-" if c < 0 else "+") + body)
    if not parts:
        return "0"
    out = "".join(parts)
    return out[1:] if out[0] == "+" else out


def to_json(P: IntBiPoly) -> str:
    return json.dumps({"coeffs": [list(r) for r in P.coeffs]})


def from_json(text: str | dict) -> IntBiPoly:
    try:
        data = json.loads(text) if isinstance(text, str) else text
        rows = data["coeffs"]
        return IntBiPoly(tuple(tuple(int(v) for v in r) for r in rows))
    except (KeyError, TypeError, ValueError) as exc:
        raise BadSpec(f"bad JSON polynomial: {exc}") from exc


def eval_bi(P: IntBiPoly, x, y):
    return P(x, y)


def poly_product(polys: Iterable[IntPoly]) -> IntPoly:
    out = IntPoly((1,))
    for p in polys:
        out = out * p
    return out
