"""Multilinear representing polynomials and univariate range collapsers.

Every Boolean function has a unique multilinear polynomial agreeing with it
on {0,1}^n; its coefficients come out of the in-place subset (Mobius)
transform of the truth table.  Monomial masks use the same bit convention as
truth-table indices: mask bit ``n-1-j`` (counting from the least significant
bit) stands for variable ``x_{j+1}``, so a monomial evaluates to 1 at input
index ``i`` exactly when ``mask & i == mask``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

from .boolfn import BooleanFunction, coerce_input

DEFAULT_INTERPOLATION_CAP = 24
DEFAULT_EXACT_DEGREE_CAP = 21
MOD_P_CAP = 27

_CHUNK = 1 << 22

_pc16 = None


def _popcount16() -> np.ndarray:
    global _pc16
    if _pc16 is None:
        table = np.zeros(1 << 16, dtype=np.int8)
        for b in range(16):
            table += ((np.arange(1 << 16) >> b) & 1).astype(np.int8)
        _pc16 = table
    return _pc16


def mobius_coefficients(table: np.ndarray) -> np.ndarray:
    """Multilinear coefficients of a 0/1 table, as an int64 array by mask.

    In-place subset transform, one pass per variable; n * 2^n additions.
    Coefficient magnitudes are below 2^n, so int64 is exact for n <= 27.
    """
    a = np.asarray(table).astype(np.int64)
    n = int(a.size).bit_length() - 1
    if a.size != 1 << n:
        raise ValueError("table length must be a power of two")
    for b in range(n):
        step = 1 << b
        a = a.reshape(-1, 2, step)
        np.subtract(a[:, 1, :], a[:, 0, :], out=a[:, 1, :])
        a = a.reshape(-1)
    return a


def evaluate_coefficients(coeffs: np.ndarray) -> np.ndarray:
    """Inverse (zeta) transform: table of values from coefficients by mask."""
    a = np.asarray(coeffs).astype(np.int64).copy()
    n = int(a.size).bit_length() - 1
    for b in range(n):
        step = 1 << b
        a = a.reshape(-1, 2, step)
        np.add(a[:, 1, :], a[:, 0, :], out=a[:, 1, :])
        a = a.reshape(-1)
    return a


def _max_popcount_nonzero(coeffs: np.ndarray) -> int:
    pc16 = _popcount16()
    best = 0
    for start in range(0, coeffs.size, _CHUNK):
        seg = coeffs[start : start + _CHUNK]
        nz = np.flatnonzero(seg)
        if nz.size:
            masks = nz.astype(np.int64) + start
            pcs = pc16[masks & 0xFFFF] + pc16[masks >> 16]
            best = max(best, int(pcs.max()))
    return best


class MultilinearPolynomial:
    """Sparse multilinear polynomial with exact rational coefficients.

    Supports the ring operations needed to transcribe displayed polynomials
    (complemented literals expand as 1 - x); products reduce x*x to x, which
    is sound on the Boolean cube.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None) -> None:
        self.n = n
        clean: dict[int, Fraction] = {}
        for mask, coeff in (terms or {}).items():
            c = Fraction(coeff)
            if not 0 <= mask < (1 << n):
                raise ValueError(f"mask {mask} out of range for n={n}")
            if c != 0:
                clean[int(mask)] = c
        self.terms = clean

    @classmethod
    def constant(cls, n: int, value) -> "MultilinearPolynomial":
        return cls(n, {0: Fraction(value)})

    @classmethod
    def variable(cls, n: int, var: int) -> "MultilinearPolynomial":
        """The monomial x_{var+1} (0-based variable position)."""
        if not 0 <= var < n:
            raise ValueError(f"variable {var} out of range")
        return cls(n, {1 << (n - 1 - var): Fraction(1)})

    @classmethod
    def complement_variable(cls, n: int, var: int) -> "MultilinearPolynomial":
        """1 - x_{var+1}."""
        return cls.constant(n, 1) - cls.variable(n, var)

    def degree(self) -> int:
        return max((mask.bit_count() for mask in self.terms), default=0)

    def _binop(self, other, sign: int) -> "MultilinearPolynomial":
        if isinstance(other, (int, Fraction)):
            other = MultilinearPolynomial.constant(self.n, other)
        if self.n != other.n:
            raise ValueError("arity mismatch")
        terms = dict(self.terms)
        for mask, c in other.terms.items():
            terms[mask] = terms.get(mask, Fraction(0)) + sign * c
        return MultilinearPolynomial(self.n, terms)

    def __add__(self, other) -> "MultilinearPolynomial":
        return self._binop(other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "MultilinearPolynomial":
        return self._binop(other, -1)

    def __rsub__(self, other) -> "MultilinearPolynomial":
        return (-self) + other

    def __neg__(self) -> "MultilinearPolynomial":
        return MultilinearPolynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "MultilinearPolynomial":
        if isinstance(other, (int, Fraction)):
            return MultilinearPolynomial(
                self.n, {m: c * other for m, c in self.terms.items()}
            )
        if self.n != other.n:
            raise ValueError("arity mismatch")
        terms: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 | m2
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return MultilinearPolynomial(self.n, terms)

    __rmul__ = __mul__

    def evaluate_index(self, index: int) -> Fraction:
        return sum(
            (c for mask, c in self.terms.items() if mask & index == mask),
            Fraction(0),
        )

    def evaluate(self, x) -> Fraction:
        return self.evaluate_index(coerce_input(x, self.n).index)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultilinearPolynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"MultilinearPolynomial(n={self.n}, terms={len(self.terms)}, degree={self.degree()})"

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"mask": mask, "num": str(c.numerator), "den": str(c.denominator)}
                for mask, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MultilinearPolynomial":
        terms = {
            int(t["mask"]): Fraction(int(t["num"]), int(t["den"]))
            for t in data["terms"]
        }
        return cls(int(data["n"]), terms)


def interpolate(f: BooleanFunction, cap: int = DEFAULT_INTERPOLATION_CAP) -> MultilinearPolynomial:
    """The unique multilinear polynomial matching f on every input.

    Coefficients of a 0/1-valued table are always integers.
    """
    if f.n > cap:
        raise ValueError(f"interpolation needs 2^{f.n} coefficients, cap is n={cap}")
    coeffs = mobius_coefficients(f.table())
    nz = np.flatnonzero(coeffs)
    return MultilinearPolynomial(
        f.n, {int(mask): Fraction(int(coeffs[mask])) for mask in nz}
    )


def degree(p: MultilinearPolynomial) -> int:
    return p.degree()


def degree_of(f: BooleanFunction, cap: int = DEFAULT_INTERPOLATION_CAP) -> int:
    """Degree of the representing polynomial, without materializing terms."""
    if f.n > cap:
        raise ValueError(f"exact degree computation capped at n={cap}")
    return _max_popcount_nonzero(mobius_coefficients(f.table()))


def degree_mod_p(f_like, prime: int, cap: int = MOD_P_CAP) -> int:
    """Degree of the representing polynomial over GF(prime).

    Takes anything exposing ``n`` and ``table()``.  The result is a lower
    bound on the true degree; they differ only when every top coefficient is
    divisible by the prime.
    """
    if prime <= 2:
        raise ValueError("prime must exceed 2")
    n = f_like.n
    if n > cap:
        raise ValueError(f"mod-p degree computation capped at n={cap}")
    a = np.asarray(f_like.table()).astype(np.int32)
    for b in range(n):
        step = 1 << b
        a = a.reshape(-1, 2, step)
        np.subtract(a[:, 1, :], a[:, 0, :], out=a[:, 1, :])
        np.mod(a[:, 1, :], prime, out=a[:, 1, :])
        a = a.reshape(-1)
    return _max_popcount_nonzero(a)


def verify_represents(p: MultilinearPolynomial, f: BooleanFunction) -> bool:
    """True iff p equals f pointwise on all 2^n inputs (exact arithmetic)."""
    if p.n != f.n:
        raise ValueError("arity mismatch")
    t = f.table()
    return all(p.evaluate_index(i) == t[i] for i in range(1 << f.n))


def f3_published_quadratic() -> MultilinearPolynomial:
    """The known degree-2 polynomial representing the builtin F3 fixture."""
    n = 3
    x = [MultilinearPolynomial.variable(n, i) for i in range(n)]
    xb = [MultilinearPolynomial.complement_variable(n, i) for i in range(n)]
    half = Fraction(1, 2)
    return (
        half * (x[0] * x[1] + xb[0] * xb[1])
        + half * (1 - (x[0] * x[2] + xb[0] * xb[2]))
        - half * (x[1] * x[2] + xb[1] * xb[2])
    )


def qe_lower_bound(f: BooleanFunction) -> int:
    """Ceiling of half the polynomial degree: a floor on exact query counts."""
    return (degree_of(f) + 1) // 2


# ---------------------------------------------------------------------------
# Univariate range polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RangePolynomial:
    """Univariate polynomial with rational coefficients, ascending powers."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = (Fraction(0),)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        if len(self.coefficients) == 1 and self.coefficients[0] == 0:
            return 0
        return len(self.coefficients) - 1

    def __call__(self, z) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def to_json_dict(self) -> dict:
        return {
            "coeffs": [
                {"num": str(c.numerator), "den": str(c.denominator)}
                for c in self.coefficients
            ]
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RangePolynomial":
        return cls(tuple(Fraction(int(c["num"]), int(c["den"])) for c in data["coeffs"]))


def fit_range_polynomial(values: Sequence[Union[int, Fraction]]) -> RangePolynomial:
    """Unique polynomial of degree <= k through (i, values[i]) for i = 0..k.

    Newton forward differences on the integer nodes: the fitted polynomial is
    sum_i diff_i * binom(z, i), expanded to monomial coefficients exactly.
    """
    vals = [Fraction(v) for v in values]
    if len(vals) < 2:
        raise ValueError("need at least two sample values")
    diffs = []
    row = vals
    for _ in range(len(vals)):
        diffs.append(row[0])
        row = [row[j + 1] - row[j] for j in range(len(row) - 1)]
    coeffs = [Fraction(0)] * len(vals)
    # falling factorial z(z-1)...(z-i+1), maintained as monomial coefficients
    falling = [Fraction(1)]
    for i, d in enumerate(diffs):
        if i > 0:
            # multiply by (z - (i-1))
            nxt = [Fraction(0)] * (len(falling) + 1)
            for power, c in enumerate(falling):
                nxt[power + 1] += c
                nxt[power] -= c * (i - 1)
            falling = nxt
        scale = d / _factorial(i)
        for power, c in enumerate(falling):
            coeffs[power] += scale * c
    return RangePolynomial(tuple(coeffs))


def _factorial(i: int) -> int:
    out = 1
    for j in range(2, i + 1):
        out *= j
    return out


def kth_finite_difference(values: Sequence[int], k: int) -> int:
    """Alternating k-th difference at 0: zero iff the fit has degree < k."""
    if len(values) != k + 1:
        raise ValueError("need exactly k+1 values")
    return sum((-1) ** (k - i) * comb(k, i) * int(values[i]) for i in range(k + 1))


def find_collapser(k: int) -> tuple[tuple[int, ...], RangePolynomial]:
    """Smallest 0/1 value vector on {0..k} whose fit has degree exactly k-1.

    Searches vectors lexicographically with v0 = 1 and v0 != v1, keeping the
    first whose k-th finite difference vanishes and whose fitted polynomial
    has degree exactly k-1.  The v0 != v1 requirement is what later makes the
    all-zero input fully sensitive in the group constructions.
    """
    if k % 2 == 0 or not 3 <= k <= 15:
        raise ValueError(f"k must be odd and in 3..15, got {k}")
    for packed in range(1 << (k - 1)):
        values = (1, 0) + tuple((packed >> (k - 2 - j)) & 1 for j in range(k - 1))
        if kth_finite_difference(values, k) != 0:
            continue
        poly = fit_range_polynomial(values)
        if poly.degree == k - 1:
            return values, poly
    raise RuntimeError(f"no collapser found for k={k}")  # unreachable for odd k


def published_k7_collapser() -> RangePolynomial:
    """Transcription of the published degree-6 polynomial for {0..7}.

    Mixed-number coefficients are read as integer plus fraction.  See
    collapser_transcription_report for whether it actually collapses to
    {0,1} and whether it is usable in the group constructions.
    """
    return RangePolynomial(
        (
            Fraction(0),
            Fraction(35, 12),      # 2 11/12
            Fraction(-211, 36),    # -5 31/36
            Fraction(63, 16),      # 3 15/16
            Fraction(-163, 144),   # -1 19/144
            Fraction(7, 48),
            Fraction(-1, 144),
        )
    )


def collapser_transcription_report(poly: RangePolynomial, k: int) -> dict:
    """Evaluate a candidate collapser on {0..k} and record its properties."""
    values = [poly(z) for z in range(k + 1)]
    boolean = all(v in (0, 1) for v in values)
    v0_ne_v1 = values[0] != values[1]
    return {
        "k": k,
        "degree": poly.degree,
        "values": [str(v) for v in values],
        "maps_to_01": boolean,
        "v0": str(values[0]),
        "v1": str(values[1]),
        "v0_ne_v1": v0_ne_v1,
        "usable_for_construction": boolean and v0_ne_v1,
    }
