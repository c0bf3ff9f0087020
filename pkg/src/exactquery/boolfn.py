"""Boolean functions as packed truth tables, with complexity measures.

A function on ``n`` variables is stored as its full truth table.  Input
``(x1, ..., xn)`` is addressed by the integer whose binary digits, most
significant first, are ``x1 x2 ... xn``; truth tables are therefore plain
arrays of length ``2**n`` indexed that way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

MAX_N = 27
DEFAULT_DCAP = 12

_BIT_CHARS = {"0": 0, "1": 1}


@dataclass(frozen=True)
class InputAssignment:
    """A concrete assignment of the n input variables; bits[0] is x1."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != self.n:
            raise ValueError(f"expected {self.n} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_string(cls, s: str) -> "InputAssignment":
        try:
            bits = tuple(_BIT_CHARS[c] for c in s)
        except KeyError:
            raise ValueError(f"invalid bit string {s!r}") from None
        return cls(len(bits), bits)

    @classmethod
    def from_index(cls, n: int, index: int) -> "InputAssignment":
        if not 0 <= index < (1 << n):
            raise ValueError(f"index {index} out of range for n={n}")
        return cls(n, tuple((index >> (n - 1 - j)) & 1 for j in range(n)))

    @property
    def index(self) -> int:
        i = 0
        for b in self.bits:
            i = (i << 1) | b
        return i

    def flipped(self, var: int) -> "InputAssignment":
        """Copy with variable ``var`` (0-based, x1 == 0) negated."""
        bits = list(self.bits)
        bits[var] ^= 1
        return InputAssignment(self.n, tuple(bits))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def coerce_input(x, n: int) -> InputAssignment:
    """Accept an InputAssignment, a bit string, or a bit sequence."""
    if isinstance(x, InputAssignment):
        pass
    elif isinstance(x, str):
        x = InputAssignment.from_string(x)
    else:
        bits = tuple(int(b) for b in x)
        x = InputAssignment(len(bits), bits)
    if x.n != n:
        raise ValueError(f"input has {x.n} bits, function takes {n}")
    return x


def hamming_weight(x: InputAssignment) -> int:
    return sum(x.bits)


class BooleanFunction:
    """Immutable truth table of a Boolean function on at most 27 variables."""

    __slots__ = ("n", "_packed", "_table")

    def __init__(self, n: int, table) -> None:
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must be in 1..{MAX_N}, got {n}")
        arr = np.asarray(table, dtype=np.uint8)
        if arr.shape != (1 << n,):
            raise ValueError(f"table must have length {1 << n}")
        if arr.max(initial=0) > 1:
            raise ValueError("table entries must be 0 or 1")
        self.n = n
        self._packed = np.packbits(arr).tobytes()
        self._table: Optional[np.ndarray] = None

    @classmethod
    def from_packed(cls, n: int, packed: bytes) -> "BooleanFunction":
        nbytes = -(-(1 << n) // 8)
        if len(packed) != nbytes:
            raise ValueError(f"packed table must have {nbytes} bytes")
        bits = np.unpackbits(np.frombuffer(packed, dtype=np.uint8))[: 1 << n]
        return cls(n, bits)

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[tuple[int, ...]], int]) -> "BooleanFunction":
        table = [int(fn(InputAssignment.from_index(n, i).bits)) & 1 for i in range(1 << n)]
        return cls(n, table)

    @classmethod
    def from_ones(cls, n: int, ones: Iterable) -> "BooleanFunction":
        table = np.zeros(1 << n, dtype=np.uint8)
        for one in ones:
            idx = InputAssignment.from_string(one).index if isinstance(one, str) else int(one)
            table[idx] = 1
        return cls(n, table)

    @classmethod
    def constant(cls, n: int, value: int) -> "BooleanFunction":
        return cls(n, np.full(1 << n, value & 1, dtype=np.uint8))

    def table(self) -> np.ndarray:
        """Unpacked truth table as a read-only uint8 array (cached)."""
        if self._table is None:
            bits = np.unpackbits(np.frombuffer(self._packed, dtype=np.uint8))
            arr = np.ascontiguousarray(bits[: 1 << self.n])
            arr.flags.writeable = False
            self._table = arr
        return self._table

    def packed(self) -> bytes:
        return self._packed

    def value_at(self, index: int) -> int:
        if not 0 <= index < (1 << self.n):
            raise ValueError(f"index {index} out of range")
        return (self._packed[index >> 3] >> (7 - (index & 7))) & 1

    def __call__(self, x) -> int:
        return self.value_at(coerce_input(x, self.n).index)

    def ones(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.table()))

    def complement(self) -> "BooleanFunction":
        return BooleanFunction(self.n, 1 - self.table())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BooleanFunction)
            and self.n == other.n
            and self._packed == other._packed
        )

    def __hash__(self) -> int:
        return hash((self.n, self._packed))

    def __repr__(self) -> str:
        if self.n <= 5:
            return f"BooleanFunction(n={self.n}, table={''.join(map(str, self.table()))})"
        return f"BooleanFunction(n={self.n}, ones={int(self.table().sum())})"

    def to_json_dict(self) -> dict:
        return {"n": self.n, "table_hex": self._packed.hex()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "BooleanFunction":
        try:
            n = int(data["n"])
            packed = bytes.fromhex(data["table_hex"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed truth-table JSON: {exc}") from exc
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must be in 1..{MAX_N}, got {n}")
        nbytes = -(-(1 << n) // 8)
        if len(packed) != nbytes:
            raise ValueError(f"table_hex must encode {nbytes} bytes for n={n}")
        bits = np.unpackbits(np.frombuffer(packed, dtype=np.uint8))[: 1 << n]
        return cls(n, bits)


def evaluate(f: BooleanFunction, x) -> int:
    return f(x)


# ---------------------------------------------------------------------------
# Named fixtures
# ---------------------------------------------------------------------------

def _f3_formula(bits: tuple[int, ...]) -> int:
    x1, x2, x3 = bits
    return int((not (x1 ^ x2)) and (x1 ^ x3))


def _g4_formula(bits: tuple[int, ...]) -> int:
    x1, x2, x3, x4 = bits
    return int((x1 ^ x2) and (x3 ^ x4))


# Eight 3-variable functions with the full 2-vs-3 query gap, truth tables
# listed by input index 000..111.
TABLE1_COLUMNS: tuple[tuple[int, ...], ...] = (
    (1, 0, 0, 0, 0, 0, 0, 1),
    (0, 1, 0, 0, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1, 0, 0),
    (0, 0, 0, 1, 1, 0, 0, 0),
    (1, 1, 1, 0, 0, 1, 1, 1),
    (1, 1, 0, 1, 1, 0, 1, 1),
    (1, 0, 1, 1, 1, 1, 0, 1),
    (0, 1, 1, 1, 1, 1, 1, 0),
)

# Eight 4-variable functions with the full 2-vs-4 query gap, listed by input
# index 0000..1111.
TABLE2_COLUMNS: tuple[tuple[int, ...], ...] = (
    (0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0),
    (0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0),
    (0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 0),
    (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1),
    (1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 1),
    (1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1),
    (1, 1, 1, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 1),
    (0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0),
)


def named_function(name: str) -> BooleanFunction:
    """Builtin functions: F3, G4, table1:i and table2:i with i in 1..8."""
    key = name.strip()
    low = key.lower()
    if low == "f3":
        return BooleanFunction.from_callable(3, _f3_formula)
    if low == "g4":
        return BooleanFunction.from_callable(4, _g4_formula)
    for prefix, columns in (("table1:", TABLE1_COLUMNS), ("table2:", TABLE2_COLUMNS)):
        if low.startswith(prefix):
            try:
                i = int(low[len(prefix):])
            except ValueError:
                raise ValueError(f"unknown function name {name!r}") from None
            if not 1 <= i <= 8:
                raise ValueError(f"{prefix}i requires i in 1..8, got {i}")
            return BooleanFunction(3 if prefix == "table1:" else 4, columns[i - 1])
    raise ValueError(f"unknown function name {name!r}")


# ---------------------------------------------------------------------------
# Complexity measures
# ---------------------------------------------------------------------------

def complement_symmetric(f: BooleanFunction) -> bool:
    """True iff f(x) equals f applied to the bitwise complement of x, for all x."""
    t = f.table()
    return bool(np.array_equal(t, t[::-1]))


def sensitivity_at(f: BooleanFunction, x) -> int:
    x = coerce_input(x, f.n)
    i = x.index
    v = f.value_at(i)
    return sum(1 for j in range(f.n) if f.value_at(i ^ (1 << (f.n - 1 - j))) != v)


def sensitivity(f: BooleanFunction) -> int:
    t = f.table().astype(np.int8)
    total = np.zeros(1 << f.n, dtype=np.int8)
    for j in range(f.n):
        pairs = t.reshape(-1, 2, 1 << j)
        diff = (pairs[:, 0, :] != pairs[:, 1, :]).astype(np.int8)
        acc = total.reshape(-1, 2, 1 << j)
        acc[:, 0, :] += diff
        acc[:, 1, :] += diff
    return int(total.max())


def _partial_assignment_tables(f: BooleanFunction) -> tuple[np.ndarray, np.ndarray]:
    """Optimal query depth for every partial assignment of f's variables.

    A partial assignment is a ternary code: digit j (base-3, least significant
    first) is 0/1 when the variable occupying table-index bit j is fixed, and
    2 when it is still free.  Returns ``(depth, flags)`` indexed by that code,
    where ``flags`` has bit 0 / bit 1 set when value 0 / 1 occurs among the
    completions.  Constant restrictions have depth 0; the full function's
    depth sits at the all-free code ``3**n - 1``.

    States are processed by increasing number of free variables, so both
    children of every min/max step are already final.  This is the usual
    minimax recursion, run bottom-up so it vectorizes.
    """
    n = f.n
    size = 3**n
    pow3 = [3**j for j in range(n)]
    codes = np.arange(size, dtype=np.int64)
    digits = np.empty((n, size), dtype=np.int8)
    rem = codes
    for j in range(n):
        digits[j] = rem % 3
        rem = rem // 3
    free_count = (digits == 2).sum(axis=0, dtype=np.int8)

    depth = np.full(size, np.iinfo(np.int8).max, dtype=np.int8)
    flags = np.zeros(size, dtype=np.uint8)

    inputs = np.arange(1 << n, dtype=np.int64)
    assigned = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        assigned += ((inputs >> j) & 1) * pow3[j]
    depth[assigned] = 0
    flags[assigned] = np.where(f.table() == 0, 1, 2).astype(np.uint8)

    for k in range(1, n + 1):
        level = np.flatnonzero(free_count == k)
        for j in range(n):
            sel = level[digits[j, level] == 2]
            if sel.size == 0:
                continue
            child0 = sel - 2 * pow3[j]
            child1 = sel - pow3[j]
            flags[sel] |= flags[child0] | flags[child1]
            cand = 1 + np.maximum(depth[child0], depth[child1])
            depth[sel] = np.minimum(depth[sel], cand)
        const = level[flags[level] != 3]
        depth[const] = 0
    return depth, flags


def deterministic_complexity(f: BooleanFunction, cap: int = DEFAULT_DCAP) -> Optional[int]:
    """Exact decision-tree depth of f, or None when f.n exceeds the cap."""
    if f.n > cap:
        return None
    depth, _ = _partial_assignment_tables(f)
    return int(depth[3**f.n - 1])


def enumerate_complement_symmetric_full_d(n: int) -> list[BooleanFunction]:
    """All complement-symmetric n-variable functions with depth exactly n.

    Candidates are generated by choosing a value freely on each complement
    pair {x, ~x}; supported for n in {3, 4}.  Sorted by truth-table value
    (index-0 entry most significant).
    """
    if n not in (3, 4):
        raise ValueError(f"enumeration supported for n in {{3, 4}}, got {n}")
    half = 1 << (n - 1)
    full = (1 << n) - 1
    found = []
    for choice in range(1 << half):
        table = np.zeros(1 << n, dtype=np.uint8)
        for cls_index in range(half):
            v = (choice >> cls_index) & 1
            table[cls_index] = v
            table[full ^ cls_index] = v
        f = BooleanFunction(n, table)
        if deterministic_complexity(f, cap=n) == n:
            found.append(f)
    found.sort(key=lambda g: tuple(g.table()))
    return found


def compose_function(h: BooleanFunction, f1: BooleanFunction) -> BooleanFunction:
    """h applied to f1 evaluated on consecutive disjoint blocks of variables.

    Block j (1-based) of the composite input feeds variables
    ``x_{(j-1)m+1} .. x_{jm}`` to the j-th argument of h.
    """
    n, m = h.n, f1.n
    total = n * m
    if total > MAX_N:
        raise ValueError(f"composite would need {total} > {MAX_N} variables")
    ht = h.table()
    ft = f1.table().astype(np.int64)
    block_mask = (1 << m) - 1
    out = np.empty(1 << total, dtype=np.uint8)
    chunk = 1 << 20
    for start in range(0, 1 << total, chunk):
        idx = np.arange(start, min(start + chunk, 1 << total), dtype=np.int64)
        hidx = np.zeros(idx.size, dtype=np.int64)
        for j in range(n):
            shift = (n - 1 - j) * m
            hidx = (hidx << 1) | ft[(idx >> shift) & block_mask]
        out[start : start + idx.size] = ht[hidx]
    return BooleanFunction(total, out)


# ---------------------------------------------------------------------------
# Summary report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexityReport:
    n: int
    sensitivity: int
    d_exact: Optional[int]
    d_lower: int
    degree: int
    qe_lower: int
    complement_symmetric: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "sensitivity": self.sensitivity,
            "d_exact": self.d_exact,
            "d_lower": self.d_lower,
            "degree": self.degree,
            "qe_lower": self.qe_lower,
            "complement_symmetric": self.complement_symmetric,
        }


def complexity_report(f: BooleanFunction, dcap: int = DEFAULT_DCAP) -> ComplexityReport:
    from . import polynomial

    s = sensitivity(f)
    deg = polynomial.degree_of(f)
    d_exact = deterministic_complexity(f, cap=dcap)
    return ComplexityReport(
        n=f.n,
        sensitivity=s,
        d_exact=d_exact,
        d_lower=max(s, deg),
        degree=deg,
        qe_lower=polynomial.qe_lower_bound(f),
        complement_symmetric=complement_symmetric(f),
    )
