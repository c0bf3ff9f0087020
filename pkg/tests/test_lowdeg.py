"""Group partitions, pairings and the low-degree construction families."""

import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from exactquery.boolfn import BooleanFunction, InputAssignment, hamming_weight
from exactquery import lowdeg, polynomial
from exactquery.lowdeg import (
    ConstructedFunction,
    GroupPartition,
    base_connection_graph,
    build_f3k,
    build_f9,
    build_f12,
    build_lemma3,
    certify,
    connection_pairs,
    connection_value,
    fixed_pairing_value,
    group_weights,
    iterate_triple,
    lemma3_params,
    p4_base,
    p4_eval,
    witness_sensitivity,
)


def random_partition(rng, max_size=6):
    sizes = [rng.randint(1, max_size) for _ in range(3)]
    assignment = [g for g, size in enumerate(sizes) for _ in range(size)]
    rng.shuffle(assignment)
    return GroupPartition(tuple(assignment))


def random_input(rng, n):
    return InputAssignment(n, tuple(rng.randint(0, 1) for _ in range(n)))


# ---------------------------------------------------------------------------
# Partitions and pairings
# ---------------------------------------------------------------------------

def test_partition_basics():
    part = GroupPartition.contiguous(2, 3, 1)
    assert part.n == 6
    assert part.sizes == (2, 3, 1)
    assert part.groups == ((0, 1), (2, 3, 4), (5,))
    with pytest.raises(ValueError):
        GroupPartition((0, 0, 1, 1))  # group 2 empty
    with pytest.raises(ValueError):
        GroupPartition.contiguous(2, 0, 1)


FIG5_INPUT = "110011100"  # ones at variables 1,2,5,6,7 (1-based)
PART9 = GroupPartition.equal(3)


def test_connection_value_fixtures():
    assert group_weights(FIG5_INPUT, PART9) == (2, 2, 1)
    assert connection_value(FIG5_INPUT, PART9) == 1
    assert connection_value("0" * 9, PART9) == 0
    assert connection_value("1" * 9, PART9) == 0


def test_connection_pairs_fixtures():
    pairs = connection_pairs(FIG5_INPUT, PART9)
    assert len(pairs) == 4
    assert connection_pairs("0" * 9, PART9) == ()
    triangle = connection_pairs("100100100", PART9)
    assert set(triangle) == {(0, 3), (0, 6), (3, 6)}


def test_pairing_identities_random():
    rng = random.Random(97)
    for _ in range(300):
        part = random_partition(rng)
        x = random_input(rng, part.n)
        k1, k2, k3 = group_weights(x, part)
        pairs = connection_pairs(x, part)
        value = connection_value(x, part)
        assert len(pairs) == 2 * k3 + k2
        assert value == k1 - k3
        assert value == hamming_weight(x) - len(pairs)
        assert 0 <= value <= max(part.sizes)
        partner_groups: dict[tuple[int, int], int] = {}
        for u, v in pairs:
            assert part.assignment[u] != part.assignment[v]
            assert x.bits[u] == 1 and x.bits[v] == 1
            for point, other in ((u, part.assignment[v]), (v, part.assignment[u])):
                key = (point, other)
                partner_groups[key] = partner_groups.get(key, 0) + 1
                assert partner_groups[key] == 1


def test_connection_value_invariant_under_group_relabeling():
    rng = random.Random(101)
    for _ in range(50):
        part = random_partition(rng)
        x = random_input(rng, part.n)
        perm = [0, 1, 2]
        rng.shuffle(perm)
        relabeled = GroupPartition(tuple(perm[g] for g in part.assignment))
        assert connection_value(x, part) == connection_value(x, relabeled)


def test_lemma1_bound_exhaustive_equal_groups():
    for i in range(1 << 9):
        x = InputAssignment.from_index(9, i)
        assert 0 <= connection_value(x, PART9) <= 3


def test_partition_mismatch():
    with pytest.raises(ValueError):
        connection_value("0101", PART9)


# ---------------------------------------------------------------------------
# The fixed connection graph
# ---------------------------------------------------------------------------

def test_base_graph_is_position_triangles():
    graph = base_connection_graph(GroupPartition.equal(3))
    assert set(graph) == {
        (0, 3), (0, 6), (3, 6),
        (1, 4), (1, 7), (4, 7),
        (2, 5), (2, 8), (5, 8),
    }


def test_fixed_pairing_matches_spread_on_prefix_packed_inputs():
    rng = random.Random(103)
    for k in (3, 5):
        part = GroupPartition.equal(k)
        for _ in range(40):
            weights = [rng.randint(0, k) for _ in range(3)]
            bits = []
            for w in weights:
                bits += [1] * w + [0] * (k - w)
            x = InputAssignment(3 * k, tuple(bits))
            assert fixed_pairing_value(x, part) == connection_value(x, part)


def test_fixed_pairing_range():
    rng = random.Random(107)
    part = GroupPartition.equal(3)
    for _ in range(100):
        x = random_input(rng, 9)
        assert 0 <= fixed_pairing_value(x, part) <= 3


# ---------------------------------------------------------------------------
# The 3k-variable family
# ---------------------------------------------------------------------------

def reference_f3k_value(x, k, values):
    """Direct per-triangle recount, bypassing the package evaluator."""
    total = 0
    for pos in range(k):
        t = x.bits[pos] + x.bits[k + pos] + x.bits[2 * k + pos]
        total += t - comb(t, 2)
    return values[total]


def test_f3k_table_matches_reference():
    cf = build_f3k(3)
    table = cf.table()
    for i in range(512):
        x = InputAssignment.from_index(9, i)
        assert table[i] == reference_f3k_value(x, 3, (1, 0, 0, 1))
        assert cf.value_at(i) == table[i]


def test_f3k_claims():
    for k, n in ((3, 9), (5, 15), (7, 21)):
        cf = build_f3k(k)
        assert cf.n == n
        assert cf.claimed_degree == 2 * (k - 1)
        assert cf.claimed_d == n
        assert cf.witness_input == (0,) * n
        assert cf.value_at(0) == 1


def test_f3k_validation():
    with pytest.raises(ValueError):
        build_f3k(4)
    with pytest.raises(ValueError):
        build_f3k(17)


def test_f3k_witness_sensitivity():
    assert witness_sensitivity(build_f3k(3)) == 9
    assert witness_sensitivity(build_f3k(5)) == 15


def test_f9_certification():
    report = certify(build_f9(), mode="exact")
    assert report.computed_degree == 4
    assert report.witness_sensitivity == 9
    assert report.status == "confirmed"
    assert report.qe_lower == 2
    assert report.degree_mode == "exact"


def test_f3k_symmetries():
    """Swapping whole groups or permuting positions in lockstep is invisible."""
    rng = random.Random(109)
    k = 3
    cf = build_f3k(k)
    for _ in range(50):
        x = random_input(rng, 3 * k)
        gperm = [0, 1, 2]
        rng.shuffle(gperm)
        pperm = list(range(k))
        rng.shuffle(pperm)
        permuted = [0] * (3 * k)
        for g in range(3):
            for pos in range(k):
                permuted[gperm[g] * k + pperm[pos]] = x.bits[g * k + pos]
        y = InputAssignment(3 * k, tuple(permuted))
        assert cf.evaluate(x) == cf.evaluate(y)


def test_f3k_7_records_transcription_substitution():
    cf = build_f3k(7)
    assert cf.params["collapser"] == "search"
    assert cf.params["collapser_values"] == [1, 0, 0, 0, 0, 0, 0, 1]
    assert any("p(0) == p(1)" in note for note in cf.notes)


def test_f45_structural_certification():
    cf = build_f3k(15)
    assert cf.n == 45
    assert cf.claimed_degree == 28
    assert cf.claimed_d == 45
    report = certify(cf, mode="structural")
    assert report.computed_degree is None
    assert report.degree_reason == "n=45 exceeds brute-force scope"
    assert report.witness_sensitivity == 45
    assert report.status == "unverified"
    # pointwise evaluation still works at this size
    assert cf.value_at(0) == 1
    assert cf.value_at(1 << 44) == 0


# ---------------------------------------------------------------------------
# The 4-variable cubic and the 12-variable function
# ---------------------------------------------------------------------------

def test_p4_fixture_values():
    assert p4_eval("0000") == 0
    assert p4_eval("1111") == 0
    assert p4_eval("0111") == 1
    assert all(p4_eval(InputAssignment.from_index(4, i)) in (0, 1) for i in range(16))


def test_f12_fixture_values():
    cf = build_f12()
    assert cf.evaluate("1" * 12) == 1
    assert witness_sensitivity(cf) == 12


def test_f12_certification():
    report = certify(build_f12(), mode="exact")
    assert report.computed_degree == 6
    assert report.witness_sensitivity == 12
    assert report.status == "confirmed"


def test_f12_mod_p_probe_matches():
    assert polynomial.degree_mod_p(build_f12(), 1_000_003) == 6


# ---------------------------------------------------------------------------
# Triple iteration
# ---------------------------------------------------------------------------

def test_iterate_p4_once_equals_f12():
    direct = build_f12().table()
    iterated = iterate_triple(p4_base(), 1).table()
    assert (direct == iterated).all()


def test_iterate_claims():
    base = build_f3k(3)
    once = iterate_triple(base, 1)
    assert once.n == 27
    assert once.claimed_degree == 8
    assert once.claimed_d == 27
    twice = iterate_triple(base, 2)
    assert twice.n == 81
    assert twice.claimed_degree == 16
    assert twice.witness_input == (0,) * 81


def test_iterate_witness_propagates():
    cf = iterate_triple(build_f3k(3), 2)
    zero = 0
    assert cf.value_at(zero) == 1
    assert cf.value_at(zero ^ (1 << 80)) == 0
    assert cf.value_at(zero ^ (1 << 40)) == 0


def test_iterate_requires_positive_t():
    with pytest.raises(ValueError):
        iterate_triple(p4_base(), 0)


def test_table_unavailable_beyond_cap():
    cf = iterate_triple(build_f3k(3), 2)
    with pytest.raises(ValueError):
        cf.table()
    with pytest.raises(ValueError):
        cf.to_boolean_function()


# ---------------------------------------------------------------------------
# Iterated family parameters
# ---------------------------------------------------------------------------

def test_lemma3_params_fixtures():
    assert lemma3_params(3, 1) == (27, 8, Fraction(27, 8))
    assert lemma3_params(3, 2)[:2] == (81, 16)
    assert lemma3_params(5, 1)[:2] == (45, 16)


def test_lemma3_params_validation():
    with pytest.raises(ValueError):
        lemma3_params(4, 1)
    with pytest.raises(ValueError):
        lemma3_params(3, 0)


def test_lemma3_builder_flags_t1():
    cf = build_lemma3(3, 1)
    assert cf.family == "lemma3"
    assert cf.n == 27 and cf.claimed_degree == 8
    assert any("t > 1" in note for note in cf.notes)
    assert not any("t > 1" in note for note in build_lemma3(3, 2).notes)


# ---------------------------------------------------------------------------
# Certification modes
# ---------------------------------------------------------------------------

def test_certify_auto_picks_exact_for_small():
    report = certify(build_f9())
    assert report.degree_mode == "exact"


def test_certify_mode_errors():
    with pytest.raises(ValueError):
        certify(build_f9(), mode="bogus")
    with pytest.raises(ValueError):
        certify(build_f3k(15), mode="exact")
    with pytest.raises(ValueError):
        certify(build_f12(), mode="mod-p", prime=65521)  # below 2^16


def test_certify_refutes_wrong_claims():
    base = build_f9()
    doctored = ConstructedFunction(
        n=base.n,
        family="doctored",
        params={},
        claimed_degree=base.claimed_degree + 1,
        claimed_d=base.claimed_d,
        witness_input=base.witness_input,
        value_at=base.value_at,
        table_builder=base.table_builder,
    )
    report = certify(doctored, mode="exact")
    assert report.status == "refuted"
    assert report.computed_degree == 4


def test_certify_mod_p_retry_note_on_mismatch():
    base = build_f9()
    doctored = ConstructedFunction(
        n=base.n,
        family="doctored",
        params={},
        claimed_degree=6,  # above the true degree: probe comes in low, retries
        claimed_d=base.claimed_d,
        witness_input=base.witness_input,
        value_at=base.value_at,
        table_builder=base.table_builder,
    )
    report = certify(doctored, mode="mod-p", prime=1_000_003)
    assert report.computed_degree == 4
    assert report.status == "refuted"
    assert any("retried" in note for note in report.notes)


def test_report_json_shape():
    data = certify(build_f9(), mode="exact").to_json_dict()
    assert data["n"] == 9
    assert data["family"] == "f3k"
    assert data["claimed_degree"] == 4
    assert data["computed_degree"] == 4
    assert data["witness_input"] == "0" * 9
    assert data["witness_sensitivity"] == 9
    assert data["status"] == "confirmed"
