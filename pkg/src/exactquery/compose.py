"""Hybrid composition: a decision tree whose reads run an exact subroutine.

The outer function is evaluated by an optimal decision tree; every time the
tree would read outer variable j, the inner algorithm runs on block j of the
composite input instead.  Exactness of the inner algorithm makes each run
deterministic, so the composite is computed with (inner queries) x (path
length) oracle calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import boolfn, qsim
from .boolfn import BooleanFunction, InputAssignment, coerce_input


@dataclass(frozen=True)
class Leaf:
    value: int


@dataclass(frozen=True)
class Node:
    var: int  # outer variable, 0-based
    if_zero: "TreeNode"
    if_one: "TreeNode"


TreeNode = Union[Leaf, Node]


@dataclass(frozen=True)
class DecisionTree:
    n: int
    root: TreeNode

    def depth(self) -> int:
        def rec(node: TreeNode) -> int:
            if isinstance(node, Leaf):
                return 0
            return 1 + max(rec(node.if_zero), rec(node.if_one))

        return rec(self.root)

    def evaluate(self, x) -> tuple[int, int]:
        """Returns (value, number of variables read on the path)."""
        x = coerce_input(x, self.n)
        node = self.root
        reads = 0
        while isinstance(node, Node):
            reads += 1
            node = node.if_one if x.bits[node.var] else node.if_zero
        return node.value, reads

    def paths_repeat_no_variable(self) -> bool:
        def rec(node: TreeNode, seen: frozenset[int]) -> bool:
            if isinstance(node, Leaf):
                return True
            if node.var in seen:
                return False
            seen = seen | {node.var}
            return rec(node.if_zero, seen) and rec(node.if_one, seen)

        return rec(self.root, frozenset())


def build_decision_tree(h: BooleanFunction) -> DecisionTree:
    """Materialize an optimal decision tree for h (depth equals exact D(h)).

    Walks the bottom-up depth tables: at each partial assignment the first
    variable achieving the minimax optimum is queried, smallest index first.
    """
    if h.n > boolfn.DEFAULT_DCAP:
        raise ValueError(f"decision tree construction capped at n={boolfn.DEFAULT_DCAP}")
    depth, flags = boolfn._partial_assignment_tables(h)
    n = h.n
    pow3 = [3**j for j in range(n)]

    def build(state: int) -> TreeNode:
        if flags[state] != 3:
            return Leaf(0 if flags[state] == 1 else 1)
        best_var = -1
        best = None
        for var in range(n):
            j = n - 1 - var  # digit position of this variable
            if (state // pow3[j]) % 3 != 2:
                continue
            child0 = state - 2 * pow3[j]
            child1 = state - pow3[j]
            cand = 1 + max(int(depth[child0]), int(depth[child1]))
            if best is None or cand < best:
                best, best_var = cand, var
        j = n - 1 - best_var
        return Node(best_var, build(state - 2 * pow3[j]), build(state - pow3[j]))

    tree = DecisionTree(n, build(3**n - 1))
    want = int(depth[3**n - 1])
    if tree.depth() != want:
        raise AssertionError(f"tree depth {tree.depth()} != optimal {want}")
    return tree


@dataclass(frozen=True)
class HybridAlgorithm:
    """Outer decision tree over n block-values, inner exact algorithm per block."""

    tree: DecisionTree
    inner: qsim.QueryAlgorithm
    inner_function: BooleanFunction

    @property
    def block_width(self) -> int:
        return self.inner_function.n

    @property
    def arity(self) -> int:
        return self.tree.n * self.block_width

    @classmethod
    def build(
        cls,
        h: BooleanFunction,
        f1: BooleanFunction,
        inner: qsim.QueryAlgorithm,
    ) -> "HybridAlgorithm":
        d = boolfn.deterministic_complexity(h)
        if d != h.n:
            raise ValueError(
                f"outer function must need all its variables (depth {d} != n {h.n})"
            )
        if not qsim.is_exact(inner, f1):
            raise ValueError("inner algorithm is not exact for the inner function")
        return cls(build_decision_tree(h), inner, f1)


def hybrid_evaluate(hy: HybridAlgorithm, x) -> tuple[int, int]:
    """Evaluate the composite input; returns (value, oracle queries used)."""
    x = coerce_input(x, hy.arity)
    m = hy.block_width
    node = hy.tree.root
    queries = 0
    while isinstance(node, Node):
        block = x.bits[node.var * m : (node.var + 1) * m]
        final = qsim.simulate(hy.inner, InputAssignment(m, block))
        value = final.deterministic_outcome()
        if value is None:
            raise AssertionError("inner run was not deterministic")
        queries += hy.inner.query_count
        node = node.if_one if value else node.if_zero
    return node.value, queries


@dataclass(frozen=True)
class GapReport:
    """Worst-case query count of the hybrid against the composite's exact depth."""

    n_inputs: int
    correct: bool
    max_queries: int
    d_exact: int
    ratio: Fraction

    def to_json_dict(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "correct": self.correct,
            "max_queries": self.max_queries,
            "d_exact": self.d_exact,
            "ratio_num": self.ratio.numerator,
            "ratio_den": self.ratio.denominator,
        }


def verify_gap(
    h: BooleanFunction,
    f1: BooleanFunction,
    inner: qsim.QueryAlgorithm,
) -> GapReport:
    """Exhaustively compare the hybrid with direct composition.

    Checks every composite input, tracks the worst query count, and measures
    the composite's exact decision-tree depth independently.
    """
    total = h.n * f1.n
    if total > boolfn.DEFAULT_DCAP:
        raise ValueError(f"exhaustive gap check capped at {boolfn.DEFAULT_DCAP} variables")
    hy = HybridAlgorithm.build(h, f1, inner)
    composite = boolfn.compose_function(h, f1)
    correct = True
    max_queries = 0
    for i in range(1 << total):
        x = InputAssignment.from_index(total, i)
        value, queries = hybrid_evaluate(hy, x)
        max_queries = max(max_queries, queries)
        if value != composite.value_at(i):
            correct = False
    d_exact = boolfn.deterministic_complexity(composite)
    assert d_exact is not None
    return GapReport(
        n_inputs=1 << total,
        correct=correct,
        max_queries=max_queries,
        d_exact=d_exact,
        ratio=Fraction(max_queries, d_exact),
    )
