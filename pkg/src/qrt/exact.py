"""Exact arithmetic: rationals, univariate polynomials and symmetric matrices.

Rationals are :class:`fractions.Fraction`.  Nothing in this module ever
touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Number) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------- polynomials


class Polynomial:
    """Univariate polynomial in ``z`` with rational coefficients (immutable).

    ``coeffs[i]`` is the coefficient of ``z**i``; trailing zeros are trimmed
    so the zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls([c])

    @classmethod
    def z(cls) -> "Polynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, z: Number) -> Fraction:
        return poly_eval(self, z)

    @staticmethod
    def _lift(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial(c / other for c in self.coeffs)
        return NotImplemented

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeff(0))
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __repr__(self):
        return f"Polynomial({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = format_rational(abs(c))
            if i == 0:
                term = mag
            else:
                mono = "z" if i == 1 else f"z^{i}"
                term = mono if abs(c) == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text


def poly_eval(p: Polynomial, z: Number) -> Fraction:
    """Horner evaluation, exact."""
    z = as_rational(z)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------- matrices


class SymMatrix:
    """Exact symmetric matrix over the rationals."""

    __slots__ = ("order", "entries")

    def __init__(self, rows: Sequence[Sequence[Number]]):
        order = len(rows)
        if order == 0:
            raise ValueError("matrix order must be positive")
        entries = tuple(tuple(as_rational(x) for x in row) for row in rows)
        for i, row in enumerate(entries):
            if len(row) != order:
                raise ValueError(f"row {i + 1} has length {len(row)}, expected {order}")
        for i in range(order):
            for j in range(i + 1, order):
                if entries[i][j] != entries[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric at ({i + 1},{j + 1}): "
                        f"{format_rational(entries[i][j])} != {format_rational(entries[j][i])}"
                    )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("SymMatrix is immutable")

    @classmethod
    def scaled(cls, scale: Number, rows: Sequence[Sequence[int]]) -> "SymMatrix":
        s = as_rational(scale)
        return cls([[s * x for x in row] for row in rows])

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, SymMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"SymMatrix(order={self.order})"

    def rows(self):
        return [list(row) for row in self.entries]

    def apply(self, v: Sequence[Number]) -> list:
        return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in self.entries]

    def quadratic_form(self, v: Sequence[Number]) -> Fraction:
        v = [as_rational(x) for x in v]
        return sum((x * y for x, y in zip(v, self.apply(v))), Fraction(0))


@dataclass(frozen=True)
class PSDResult:
    """Outcome of :func:`psd_check`.

    On success ``pivots`` lists ``(index, pivot value)`` in elimination order.
    On failure ``witness`` is a rational vector with negative quadratic form.
    """

    is_psd: bool
    pivots: tuple = ()
    witness: tuple = ()

    def __bool__(self):
        return self.is_psd


def psd_check(m: SymMatrix) -> PSDResult:
    """Decide positive semidefiniteness exactly by symmetric elimination.

    A strictly positive diagonal entry of the current Schur complement is used
    as pivot at every step.  The matrix is PSD iff the process ends with a
    zero residual.  A negative diagonal entry, or a zero diagonal entry in a
    nonzero row, certifies the opposite; the witness is pulled back to the
    original coordinates through the recorded elimination steps.
    """
    n = m.order
    s = [list(row) for row in m.entries]
    active = list(range(n))
    steps = []  # (pivot index, snapshot of the pivot row restricted to active indices)

    while active:
        neg = next((i for i in active if s[i][i] < 0), None)
        if neg is not None:
            y = {neg: Fraction(1)}
            return PSDResult(False, witness=_pull_back(y, steps, n, m))
        piv = next((i for i in active if s[i][i] > 0), None)
        if piv is None:
            for i in active:
                for j in active:
                    if s[i][j] != 0:
                        # s[i][i] == 0: x = t*e_i + e_j gives 2 t s_ij + s_jj
                        t = -(s[j][j] + 1) / (2 * s[i][j])
                        y = {i: t, j: Fraction(1)}
                        return PSDResult(False, witness=_pull_back(y, steps, n, m))
            break
        p = s[piv][piv]
        rest = [i for i in active if i != piv]
        steps.append((piv, p, {j: s[piv][j] for j in rest}))
        for i in rest:
            f = s[i][piv] / p
            if f:
                row_i, row_p = s[i], s[piv]
                for j in rest:
                    row_i[j] -= f * row_p[j]
        active = rest

    return PSDResult(True, pivots=tuple((i, p) for i, p, _ in steps))


def _pull_back(y: dict, steps, n: int, m: SymMatrix) -> tuple:
    x = [Fraction(0)] * n
    for i, val in y.items():
        x[i] = val
    for piv, p, row in reversed(steps):
        x[piv] = -sum((c * x[j] for j, c in row.items()), Fraction(0)) / p
    # clear denominators so the witness is an integer vector
    den = lcm(*(v.denominator for v in x)) if x else 1
    x = [v * den for v in x]
    if m.quadratic_form(x) >= 0:  # pragma: no cover - would be an algorithm bug
        raise AssertionError("PSD witness construction failed")
    return tuple(x)


def rank(rows: Sequence[Sequence[Number]]) -> int:
    return len(_rref([list(map(as_rational, r)) for r in rows])[1])


def _rref(a):
    a = [row[:] for row in a]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def kernel_basis(m: SymMatrix) -> list:
    """Exact basis of the null space (empty when ``m`` is nonsingular)."""
    a, pivots = _rref([list(row) for row in m.entries])
    n = m.order
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(v)
    return basis


def same_span(m: SymMatrix, claimed: Sequence[Sequence[Number]]) -> bool:
    """True iff ``claimed`` spans exactly the kernel of ``m``.

    Containment one way: every claimed vector is annihilated by ``m``.  The
    other way: the claimed vectors have rank equal to the kernel dimension.
    """
    claimed = [[as_rational(x) for x in v] for v in claimed]
    if any(len(v) != m.order for v in claimed):
        return False
    if any(any(x != 0 for x in m.apply(v)) for v in claimed):
        return False
    dim = len(kernel_basis(m))
    if not claimed:
        return dim == 0
    return rank(claimed) == dim
