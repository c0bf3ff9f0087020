"""Exact simulator for alternating unitary / sign-query algorithms.

Amplitudes live in the field Q(sqrt 2): every scalar is ``a + b*sqrt(2)``
with rational a, b, which covers all matrix entries the builtin algorithms
need (0, +-1, +-1/2, +-1/sqrt2) and makes "probability exactly 1" a decidable
comparison.  A sign query multiplies amplitude i by -1 exactly when the
variable assigned to that amplitude is 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, sqrt
from typing import Optional, Sequence, Union

import numpy as np

from .boolfn import BooleanFunction, InputAssignment, coerce_input, complement_symmetric

FLOAT_TOLERANCE = 1e-9


def _reduced(num: int, den: int) -> tuple[int, int]:
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if num == 0:
        return 0, 1
    if den < 0:
        num, den = -num, -den
    g = gcd(num, den)
    return num // g, den // g


class ExactScalar:
    """a + b*sqrt(2) with rational components; closed under ring operations.

    Components are kept as reduced integer pairs, which keeps the hot
    simulation loop off the Fraction machinery.
    """

    __slots__ = ("an", "ad", "bn", "bd")

    def __init__(self, an: int = 0, ad: int = 1, bn: int = 0, bd: int = 1) -> None:
        self.an, self.ad = _reduced(an, ad)
        self.bn, self.bd = _reduced(bn, bd)

    @classmethod
    def of(cls, a, b=0) -> "ExactScalar":
        a = Fraction(a)
        b = Fraction(b)
        return cls(a.numerator, a.denominator, b.numerator, b.denominator)

    @property
    def a(self) -> Fraction:
        return Fraction(self.an, self.ad)

    @property
    def b(self) -> Fraction:
        return Fraction(self.bn, self.bd)

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(
            self.an * other.ad + other.an * self.ad,
            self.ad * other.ad,
            self.bn * other.bd + other.bn * self.bd,
            self.bd * other.bd,
        )

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(
            self.an * other.ad - other.an * self.ad,
            self.ad * other.ad,
            self.bn * other.bd - other.bn * self.bd,
            self.bd * other.bd,
        )

    def __neg__(self) -> "ExactScalar":
        out = ExactScalar.__new__(ExactScalar)
        out.an, out.ad, out.bn, out.bd = -self.an, self.ad, -self.bn, self.bd
        return out

    def __mul__(self, other: "ExactScalar") -> "ExactScalar":
        # (a1 + b1 r)(a2 + b2 r) = a1 a2 + 2 b1 b2 + (a1 b2 + b1 a2) r
        return ExactScalar(
            self.an * other.an * self.bd * other.bd
            + 2 * self.bn * other.bn * self.ad * other.ad,
            self.ad * other.ad * self.bd * other.bd,
            self.an * other.bn * self.bd * other.ad
            + self.bn * other.an * self.ad * other.bd,
            self.ad * other.bd * self.bd * other.ad,
        )

    def is_zero(self) -> bool:
        return self.an == 0 and self.bn == 0

    def is_rational(self) -> bool:
        return self.bn == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactScalar)
            and self.an == other.an
            and self.ad == other.ad
            and self.bn == other.bn
            and self.bd == other.bd
        )

    def __hash__(self) -> int:
        return hash((self.an, self.ad, self.bn, self.bd))

    def __float__(self) -> float:
        return self.an / self.ad + (self.bn / self.bd) * sqrt(2)

    def __str__(self) -> str:
        a = f"{self.an}" if self.ad == 1 else f"{self.an}/{self.ad}"
        broot = f"{self.bn}" if self.bd == 1 else f"{self.bn}/{self.bd}"
        if self.bn == 0:
            return a
        if self.an == 0:
            return f"{broot} r2"
        if self.bn > 0:
            return f"{a} + {broot} r2"
        neg = f"{-self.bn}" if self.bd == 1 else f"{-self.bn}/{self.bd}"
        return f"{a} - {neg} r2"

    def __repr__(self) -> str:
        return f"ExactScalar({self})"


ZERO = ExactScalar()
ONE = ExactScalar.of(1)
HALF = ExactScalar.of(Fraction(1, 2))
INV_SQRT2 = ExactScalar.of(0, Fraction(1, 2))  # 1/sqrt2 == (1/2) sqrt2

_SCALAR_RE = re.compile(
    r"^\s*(?P<rat>[+-]?\d+(?:/\d+)?)?"
    r"\s*(?:(?P<sign>[+-])?\s*(?P<root>[+-]?\d+(?:/\d+)?)\s*r2)?\s*$"
)


def parse_scalar(text: str) -> ExactScalar:
    """Parse exact scalar strings: "0", "-1/2", "1/2 r2", "1/2 + 1/2 r2"."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("rat") is None and m.group("root") is None):
        raise ValueError(f"cannot parse exact scalar {text!r}")
    a = Fraction(m.group("rat")) if m.group("rat") else Fraction(0)
    b = Fraction(0)
    if m.group("root") is not None:
        b = Fraction(m.group("root"))
        if m.group("sign") == "-":
            b = -b
    return ExactScalar.of(a, b)


class UnitaryMatrix:
    """Square matrix of exact scalars; unitarity is checked, not assumed."""

    __slots__ = ("dim", "rows")

    def __init__(self, rows: Sequence[Sequence[ExactScalar]]) -> None:
        self.dim = len(rows)
        if any(len(r) != self.dim for r in rows):
            raise ValueError("matrix must be square")
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_values(cls, rows) -> "UnitaryMatrix":
        def conv(v):
            if isinstance(v, ExactScalar):
                return v
            if isinstance(v, str):
                return parse_scalar(v)
            return ExactScalar.of(v)

        return cls([[conv(v) for v in row] for row in rows])

    def apply(self, state: tuple[ExactScalar, ...]) -> tuple[ExactScalar, ...]:
        out = []
        for row in self.rows:
            acc = ZERO
            for entry, amp in zip(row, state):
                if not (entry.is_zero() or amp.is_zero()):
                    acc = acc + entry * amp
            out.append(acc)
        return tuple(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, UnitaryMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim})"


def check_unitary(m: UnitaryMatrix) -> bool:
    """True iff M^T M is exactly the identity (all builtin matrices are real)."""
    for i in range(m.dim):
        for j in range(m.dim):
            acc = ZERO
            for k in range(m.dim):
                acc = acc + m.rows[k][i] * m.rows[k][j]
            want = ONE if i == j else ZERO
            if acc != want:
                return False
    return True


@dataclass(frozen=True)
class QueryLayer:
    """Per-amplitude variable assignment; None leaves an amplitude untouched."""

    dim: int
    assignment: tuple[Optional[int], ...]

    def __post_init__(self) -> None:
        if len(self.assignment) != self.dim:
            raise ValueError("assignment length must equal dim")

    def apply(self, state: tuple[ExactScalar, ...], x: InputAssignment) -> tuple[ExactScalar, ...]:
        return tuple(
            -amp if var is not None and x.bits[var] else amp
            for amp, var in zip(state, self.assignment)
        )


Layer = Union[UnitaryMatrix, QueryLayer]


class QueryAlgorithm:
    """Alternating unitary and sign-query layers with output bit labels."""

    __slots__ = ("dim", "n", "layers", "outputs")

    def __init__(
        self,
        dim: int,
        n: int,
        layers: Sequence[Layer],
        outputs: Sequence[int],
    ) -> None:
        self.dim = dim
        self.n = n
        self.layers = tuple(layers)
        self.outputs = tuple(int(o) for o in outputs)
        if len(self.outputs) != dim:
            raise ValueError("outputs must label every basis index")
        if any(o not in (0, 1) for o in self.outputs):
            raise ValueError("output labels must be bits")
        for layer in self.layers:
            if isinstance(layer, UnitaryMatrix):
                if layer.dim != dim:
                    raise ValueError("unitary layer dimension mismatch")
                if not check_unitary(layer):
                    raise ValueError("layer matrix is not exactly unitary")
            elif isinstance(layer, QueryLayer):
                if layer.dim != dim:
                    raise ValueError("query layer dimension mismatch")
                for var in layer.assignment:
                    if var is not None and not 0 <= var < n:
                        raise ValueError(f"query variable {var} out of range")
            else:
                raise TypeError(f"unsupported layer {layer!r}")

    @property
    def query_count(self) -> int:
        return sum(1 for layer in self.layers if isinstance(layer, QueryLayer))

    def with_outputs(self, outputs: Sequence[int]) -> "QueryAlgorithm":
        return QueryAlgorithm(self.dim, self.n, self.layers, outputs)

    def __repr__(self) -> str:
        return (
            f"QueryAlgorithm(dim={self.dim}, n={self.n}, "
            f"layers={len(self.layers)}, queries={self.query_count})"
        )


@dataclass(frozen=True)
class FinalState:
    """Amplitudes after the last layer, plus per-label probability mass."""

    amplitudes: tuple[ExactScalar, ...]
    outcome_prob: dict[int, ExactScalar]
    trace: Optional[tuple[tuple[ExactScalar, ...], ...]] = None

    def deterministic_outcome(self) -> Optional[int]:
        for label, prob in self.outcome_prob.items():
            if prob == ONE:
                return label
        return None

    def deterministic_index(self) -> Optional[int]:
        """Basis index holding all probability mass, if there is one."""
        hit = None
        for i, amp in enumerate(self.amplitudes):
            if not amp.is_zero():
                if hit is not None:
                    return None
                if amp * amp != ONE:
                    return None
                hit = i
        return hit


def simulate(alg: QueryAlgorithm, x, trace: bool = False) -> FinalState:
    """Run the algorithm on one input, starting from basis state 0."""
    x = coerce_input(x, alg.n)
    state = tuple(ONE if i == 0 else ZERO for i in range(alg.dim))
    states = []
    for layer in alg.layers:
        state = layer.apply(state, x) if isinstance(layer, QueryLayer) else layer.apply(state)
        if trace:
            states.append(state)
    probs = {0: ZERO, 1: ZERO}
    for amp, label in zip(state, alg.outputs):
        probs[label] = probs[label] + amp * amp
    return FinalState(state, probs, tuple(states) if trace else None)


def is_exact(alg: QueryAlgorithm, f: BooleanFunction) -> bool:
    """True iff the measured label equals f(x) with probability exactly 1, always."""
    if alg.n != f.n:
        raise ValueError("algorithm and function arity mismatch")
    for i in range(1 << f.n):
        final = simulate(alg, InputAssignment.from_index(f.n, i))
        if final.outcome_prob[f.value_at(i)] != ONE:
            return False
    return True


@dataclass(frozen=True)
class ClassAssignment:
    """Where each complement class {x, ~x} lands, when landing is deterministic.

    ``index_of`` maps the class representative min(i, ~i) to the basis index
    carrying all probability mass for both members.  ``injective`` records
    whether distinct classes use distinct indices; relabeling a function onto
    the algorithm only needs classes sharing an index to share the value.
    """

    n: int
    index_of: dict[int, int]
    injective: bool


def classify_final(alg: QueryAlgorithm) -> ClassAssignment:
    n = alg.n
    full = (1 << n) - 1
    index_of: dict[int, int] = {}
    for rep in range(1 << n):
        if rep > (full ^ rep):
            continue
        hits = []
        for member in {rep, full ^ rep}:
            final = simulate(alg, InputAssignment.from_index(n, member))
            idx = final.deterministic_index()
            if idx is None:
                raise ValueError(
                    f"final state on input {member:0{n}b} is not a single basis state"
                )
            hits.append(idx)
        if len(set(hits)) != 1:
            raise ValueError(
                f"complement class of {rep:0{n}b} lands on two different indices"
            )
        index_of[rep] = hits[0]
    injective = len(set(index_of.values())) == len(index_of)
    return ClassAssignment(n, index_of, injective)


def relabel_outputs(alg: QueryAlgorithm, f: BooleanFunction) -> QueryAlgorithm:
    """Reuse the layers, choosing output labels so the algorithm computes f.

    Requires f to be complement-symmetric and every complement class to land
    on a single basis index; classes sharing an index must share f's value.
    """
    if alg.n != f.n:
        raise ValueError("algorithm and function arity mismatch")
    if not complement_symmetric(f):
        raise ValueError("function is not complement-symmetric")
    assignment = classify_final(alg)
    outputs: list[Optional[int]] = [None] * alg.dim
    for rep, idx in assignment.index_of.items():
        value = f.value_at(rep)
        if outputs[idx] is not None and outputs[idx] != value:
            raise ValueError(
                "two complement classes with different values share a basis index"
            )
        outputs[idx] = value
    return alg.with_outputs([o if o is not None else 0 for o in outputs])


# ---------------------------------------------------------------------------
# Builtin algorithms
# ---------------------------------------------------------------------------

def a1() -> QueryAlgorithm:
    """Two-query, four-amplitude algorithm computing the builtin F3.

    Layer sequence U0, Q(x1,x2,x1,x2), U1, Q(x3,x1,x2,x3), U1, U0; outputs
    label index 3 with 1 (inputs 001 and 110 land there) and the rest with 0.
    """
    h = HALF
    u0 = UnitaryMatrix(
        [
            [h, h, h, h],
            [h, -h, h, -h],
            [h, h, -h, -h],
            [h, -h, -h, h],
        ]
    )
    r = INV_SQRT2
    u1 = UnitaryMatrix(
        [
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, r, r, ZERO],
            [ZERO, r, -r, ZERO],
            [ZERO, ZERO, ZERO, ONE],
        ]
    )
    q1 = QueryLayer(4, (0, 1, 0, 1))
    q2 = QueryLayer(4, (2, 0, 1, 2))
    return QueryAlgorithm(4, 3, (u0, q1, u1, q2, u1, u0), (0, 0, 0, 1))


def a2() -> QueryAlgorithm:
    """Two-query, four-amplitude algorithm computing the builtin G4.

    Two parallel one-query parity gadgets: (H x H), a query reading x1/x2 by
    the first register bit, a query reading x3/x4 by the second, (H x H).
    The final basis index is (x1 xor x2, x3 xor x4), so labeling index 3 with
    1 computes the conjunction of the two parities.
    """
    h = HALF
    hh = UnitaryMatrix(
        [
            [h, h, h, h],
            [h, -h, h, -h],
            [h, h, -h, -h],
            [h, -h, -h, h],
        ]
    )
    qa = QueryLayer(4, (0, 0, 1, 1))
    qb = QueryLayer(4, (2, 3, 2, 3))
    return QueryAlgorithm(4, 4, (hh, qa, qb, hh), (0, 0, 0, 1))


# ---------------------------------------------------------------------------
# JSON codec (exact mode)
# ---------------------------------------------------------------------------

def algorithm_to_json_dict(alg: QueryAlgorithm) -> dict:
    layers = []
    for layer in alg.layers:
        if isinstance(layer, UnitaryMatrix):
            layers.append(
                {"unitary": [[str(v) for v in row] for row in layer.rows]}
            )
        else:
            layers.append(
                {"query": [None if v is None else v + 1 for v in layer.assignment]}
            )
    return {"dim": alg.dim, "n": alg.n, "layers": layers, "outputs": list(alg.outputs)}


def algorithm_from_json_dict(data: dict) -> QueryAlgorithm:
    """Exact-mode decoder; variable numbers in query layers are 1-based."""
    try:
        dim = int(data["dim"])
        n = int(data["n"])
        raw_layers = data["layers"]
        outputs = data["outputs"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed algorithm JSON: {exc}") from exc
    layers: list[Layer] = []
    for entry in raw_layers:
        if "unitary" in entry:
            layers.append(UnitaryMatrix.from_values(entry["unitary"]))
        elif "query" in entry:
            assignment = tuple(
                None if v is None else int(v) - 1 for v in entry["query"]
            )
            layers.append(QueryLayer(dim, assignment))
        else:
            raise ValueError(f"layer must be 'unitary' or 'query': {entry!r}")
    return QueryAlgorithm(dim, n, layers, outputs)


# ---------------------------------------------------------------------------
# Floating-point mode
# ---------------------------------------------------------------------------

@dataclass
class FloatSimulation:
    amplitudes: np.ndarray
    outcome_prob: dict[int, float]

    def outcome_within(self, tol: float = FLOAT_TOLERANCE) -> Optional[int]:
        for label, p in self.outcome_prob.items():
            if abs(p - 1.0) <= tol:
                return label
        return None


def simulate_float(alg: QueryAlgorithm, x) -> FloatSimulation:
    """Same computation in float arithmetic (cross-check / user tolerance mode)."""
    x = coerce_input(x, alg.n)
    state = np.zeros(alg.dim)
    state[0] = 1.0
    for layer in alg.layers:
        if isinstance(layer, UnitaryMatrix):
            m = np.array([[float(v) for v in row] for row in layer.rows])
            state = m @ state
        else:
            signs = np.array(
                [
                    -1.0 if var is not None and x.bits[var] else 1.0
                    for var in layer.assignment
                ]
            )
            state = state * signs
    probs = {0: 0.0, 1: 0.0}
    for amp, label in zip(state, alg.outputs):
        probs[label] += float(amp) ** 2
    return FloatSimulation(state, probs)
