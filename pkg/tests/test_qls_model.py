"""Quantum LS paths: validation, operators, degree, involutions, tensors."""

import itertools
import json
from fractions import Fraction

import pytest

from qalcove.lie_data import InputError, Weight, build_root_datum
from qalcove.qls_model import (
    build_crystal,
    deg,
    deg_of_involution,
    dual,
    e_operator,
    epsilon,
    f_operator,
    lusztig_S,
    omega,
    phi,
    qls_path,
    straight_path,
    tensor,
)

A1 = build_root_datum("A", 1)
A2 = build_root_datum("A", 2)
C2 = build_root_datum("C", 2)
B2 = build_root_datum("B", 2)
G2 = build_root_datum("G", 2)


def path(datum, lam, directions, breaks):
    return qls_path(datum, Weight(lam), directions, breaks)


def omega_affine(datum, j):
    return 0 if j == 0 else datum.weyl.omega[j - 1]


# ------------------------------------------------------------------ validation


def test_valid_half_break_path():
    eta = path(A1, (2,), [(1,), ()], (0, Fraction(1, 2), 1))
    assert len(eta.directions) == 2


def test_invalid_third_break_path():
    with pytest.raises(InputError, match="segment 1"):
        path(A1, (2,), [(1,), ()], (0, Fraction(1, 3), 1))


def test_straight_paths_always_valid():
    for datum, lam in [(A1, (1,)), (A2, (1, 1)), (C2, (0, 1))]:
        lam = Weight(lam)
        J = datum.stabilizer(lam)
        for x in datum.weyl.coset_reps(J):
            eta = straight_path(datum, lam, x)
            assert eta.directions == (x,)


def test_rejects_non_dominant_weight():
    with pytest.raises(InputError, match="dominant"):
        path(A1, (-1,), [()], (0, 1))


def test_rejects_bad_break_counts_and_ranges():
    with pytest.raises(InputError, match="plus one"):
        path(A1, (2,), [()], (0, Fraction(1, 2), 1))
    with pytest.raises(InputError, match="start at 0"):
        path(A1, (2,), [()], (Fraction(1, 2), 1))
    with pytest.raises(InputError, match="increasing"):
        path(A1, (2,), [(1,), ()], (0, 1, 1))


def test_rejects_equal_consecutive_directions():
    with pytest.raises(InputError, match="coincide"):
        path(A1, (2,), [(1,), (1,)], (0, Fraction(1, 2), 1))


def test_rejects_non_minimal_coset_representative():
    # s2 fixes w1 in A2, so s2 is not the minimal representative of its coset
    with pytest.raises(InputError, match="minimal coset"):
        path(A2, (1, 0), [(2,)], (0, 1))


def test_rejects_node_out_of_range():
    with pytest.raises(InputError, match="outside"):
        path(A1, (2,), [(3,)], (0, 1))


# ------------------------------------------------------------------ evaluation


def test_straight_path_evaluates_linearly():
    eta = straight_path(A2, Weight((1, 1)))
    for t in (0, Fraction(1, 3), Fraction(2, 2)):
        assert eta.evaluate(t).coords == (Fraction(t), Fraction(t))


def test_half_break_path_has_zero_weight():
    eta = path(A1, (2,), [(1,), ()], (0, Fraction(1, 2), 1))
    assert eta.weight == Weight((0,))
    assert eta.evaluate(Fraction(1, 2)).coords == (Fraction(-1),)


def test_straight_path_weight_is_orbit_point():
    lam = Weight((1, 1))
    for x in A2.weyl.elements:
        assert straight_path(A2, lam, x).weight == x.act_weight(lam)


def test_evaluate_rejects_time_outside_unit_interval():
    eta = straight_path(A1, Weight((1,)))
    with pytest.raises(InputError, match="outside"):
        eta.evaluate(Fraction(3, 2))


# -------------------------------------------------------------- root operators


def test_raising_simple_label_on_lowest_a1():
    lam = Weight((1,))
    low = straight_path(A1, lam, A1.weyl.simple[0])
    assert e_operator(low, 1) == straight_path(A1, lam)


def test_raising_undefined_on_dominant_straight_path():
    for datum, lam in [(A1, (1,)), (A2, (1, 1)), (C2, (0, 1))]:
        eta = straight_path(datum, Weight(lam))
        for j in range(1, datum.rank + 1):
            assert e_operator(eta, j) is None


def test_lowering_simple_label_on_dominant_a1():
    lam = Weight((1,))
    assert f_operator(straight_path(A1, lam), 1) == straight_path(A1, lam, A1.weyl.simple[0])


def test_affine_label_pair_on_a1_fundamental():
    lam = Weight((1,))
    top = straight_path(A1, lam)
    low = straight_path(A1, lam, A1.weyl.simple[0])
    assert e_operator(top, 0) == low
    assert f_operator(low, 0) == top


def test_affine_raising_splits_a1_doubled():
    eta = e_operator(straight_path(A1, Weight((2,))), 0)
    assert eta == path(A1, (2,), [(), (1,)], (0, Fraction(1, 2), 1))


def test_affine_raising_merges_back_to_straight():
    eta = path(A1, (2,), [(), (1,)], (0, Fraction(1, 2), 1))
    assert e_operator(eta, 0) == path(A1, (2,), [(1,)], (0, 1))


def test_operator_rejects_label_outside_affine_set():
    with pytest.raises(InputError, match="outside"):
        e_operator(straight_path(A1, Weight((1,))), 2)


def test_string_lengths_on_a1_fundamental():
    lam = Weight((1,))
    top = straight_path(A1, lam)
    low = straight_path(A1, lam, A1.weyl.simple[0])
    assert (epsilon(top, 1), phi(top, 1)) == (0, 1)
    assert (epsilon(low, 1), phi(low, 1)) == (1, 0)
    assert (epsilon(top, 0), phi(top, 0)) == (1, 0)
    assert (epsilon(low, 0), phi(low, 0)) == (0, 1)


def test_string_lengths_match_arrow_walks():
    for datum, lam in [(A1, (2,)), (A2, (1, 1)), (C2, (0, 1))]:
        graph = build_crystal(datum, Weight(lam))
        for v in graph.vertices:
            for j in graph.labels:
                assert epsilon(v, j) == graph.eps(v, j)
                assert phi(v, j) == graph.phi(v, j)


# --------------------------------------------------------------------- degree


def test_degree_of_straight_dominant_path_is_zero():
    for datum, lam in [(A1, (3,)), (A2, (2, 1)), (C2, (1, 1)), (G2, (1, 0))]:
        assert deg(straight_path(datum, Weight(lam))) == 0


def test_degree_of_split_paths_a1_doubled():
    assert deg(path(A1, (2,), [(), (1,)], (0, Fraction(1, 2), 1))) == -1
    assert deg(path(A1, (2,), [(1,), ()], (0, Fraction(1, 2), 1))) == 0


def test_degree_nonpositive_crystal_wide():
    for datum, lam in [(A1, (3,)), (A2, (1, 1)), (C2, (0, 1)), (B2, (1, 0))]:
        graph = build_crystal(datum, Weight(lam))
        assert all(deg(v) <= 0 for v in graph.vertices)


def test_degree_recursion_along_raising_arrows():
    # label 0 drops the degree by 1 when the initial direction survives and
    # jumps by <theta^vee, initial> - 1 when it gets reflected; other labels
    # leave the degree alone
    for datum, lam in [(A1, (2,)), (A1, (3,)), (A2, (1, 1)), (C2, (0, 1)), (C2, (1, 0)), (B2, (0, 1))]:
        graph = build_crystal(datum, Weight(lam))
        theta_vee = datum.positive_coroots[datum.theta]
        for (v, j), w in graph.e_arrows.items():
            if j != 0:
                assert deg(w) == deg(v)
            elif w.initial_direction == v.initial_direction:
                assert deg(w) == deg(v) - 1
            else:
                assert deg(w) == deg(v) + datum.pairing(theta_vee, v.initial_direction) - 1


# ------------------------------------------------- duality, omega, Lusztig's S


def test_s_of_straight_dominant_path():
    for datum, lam in [(A2, (1, 1)), (C2, (0, 1)), (A2, (1, 0))]:
        lam = Weight(lam)
        J = datum.stabilizer(lam)
        expect = datum.weyl.min_coset_rep(datum.weyl.longest, J)
        assert lusztig_S(straight_path(datum, lam)) == straight_path(datum, lam, expect)


def test_s_fixes_the_zero_weight_split_path():
    eta = path(A1, (2,), [(1,), ()], (0, Fraction(1, 2), 1))
    assert lusztig_S(eta) == eta


def test_s_degree_by_both_formulas():
    eta = path(A1, (2,), [(), (1,)], (0, Fraction(1, 2), 1))
    assert deg_of_involution(eta) == -1
    assert deg(lusztig_S(eta)) == -1


def test_s_is_an_involution_with_reflected_weight():
    for datum, lam in [(A1, (2,)), (A2, (1, 1)), (C2, (0, 1))]:
        graph = build_crystal(datum, Weight(lam))
        w0 = datum.weyl.longest
        for v in graph.vertices:
            assert lusztig_S(lusztig_S(v)) == v
            assert lusztig_S(v).weight == w0.act_weight(v.weight)
            assert deg_of_involution(v) == deg(lusztig_S(v))


def test_s_swaps_raising_and_lowering_with_relabel():
    for datum, lam in [(A1, (2,)), (A2, (1, 1)), (A2, (1, 0)), (C2, (0, 1))]:
        graph = build_crystal(datum, Weight(lam))
        for v in graph.vertices:
            for j in graph.labels:
                image = f_operator(lusztig_S(v), omega_affine(datum, j))
                lifted = e_operator(v, j)
                assert (lifted is None) == (image is None)
                if lifted is not None:
                    assert lusztig_S(lifted) == image


def test_dual_factors_through_s_and_omega():
    for datum, lam in [(A1, (2,)), (A2, (1, 0)), (C2, (1, 0)), (B2, (1, 0))]:
        graph = build_crystal(datum, Weight(lam))
        for v in graph.vertices:
            assert dual(v) == omega(lusztig_S(v))
            assert dual(dual(v)) == v


def test_dual_swaps_raising_and_lowering_same_label():
    for datum, lam in [(A1, (2,)), (A2, (1, 0)), (C2, (0, 1))]:
        graph = build_crystal(datum, Weight(lam))
        for v in graph.vertices:
            for j in graph.labels:
                image = f_operator(dual(v), j)
                lifted = e_operator(v, j)
                assert (lifted is None) == (image is None)
                if lifted is not None:
                    assert dual(lifted) == image


def test_dual_lands_in_the_contragredient_shape():
    eta = straight_path(A2, Weight((1, 0)))
    assert dual(eta).lam == Weight((0, 1))
    assert omega(eta).lam == Weight((0, 1))


# ------------------------------------------------------------- crystal closure


def test_crystal_sizes_small_cases():
    cases = [
        (A1, (1,), 2),
        (A1, (2,), 4),
        (A1, (3,), 8),
        (A2, (1, 0), 3),
        (A2, (1, 1), 9),
        (C2, (1, 0), 4),
        (C2, (0, 1), 5),
        (B2, (1, 0), 5),
        (B2, (0, 1), 4),
    ]
    for datum, lam, size in cases:
        graph = build_crystal(datum, Weight(lam))
        assert len(graph.vertices) == size
        assert graph.is_connected()


def test_crystal_distinguished_is_straight_dominant():
    graph = build_crystal(A2, Weight((1, 1)))
    assert graph.distinguished == straight_path(A2, Weight((1, 1)))
    assert graph.weight_of(graph.distinguished) == Weight((1, 1))


def test_weight_multiset_is_reflection_invariant():
    for datum, lam in [(A1, (3,)), (A2, (1, 1)), (C2, (0, 1)), (B2, (1, 0)), (G2, (1, 0))]:
        graph = build_crystal(datum, Weight(lam))
        weights = sorted(graph.weights[v].coords for v in graph.vertices)
        for s in datum.weyl.simple:
            image = sorted(s.act_weight(graph.weights[v]).coords for v in graph.vertices)
            assert image == weights


def test_arrow_reversibility_explicitly():
    graph = build_crystal(C2, Weight((0, 1)))
    for (v, j), w in graph.f_arrows.items():
        assert graph.e_arrows[(w, j)] == v
    for (v, j), w in graph.e_arrows.items():
        assert graph.f_arrows[(w, j)] == v


def brute_force_paths(datum, lam):
    """Every valid path whose breaks have denominator at most the largest
    pairing of a positive coroot against lam."""
    lam = Weight(lam)
    J = datum.stabilizer(lam)
    reps = datum.weyl.coset_reps(J)
    top = max(datum.pairing(c, lam) for c in datum.positive_coroots)
    values = sorted(
        {Fraction(p, q) for q in range(2, top + 1) for p in range(1, q)}
    )
    found = set()
    for s in range(1, len(values) + 2):
        for dirs in itertools.product(reps, repeat=s):
            if any(a == b for a, b in zip(dirs, dirs[1:])):
                continue
            for mids in itertools.combinations(values, s - 1):
                breaks = (Fraction(0),) + mids + (Fraction(1),)
                try:
                    found.add(qls_path(datum, lam, dirs, breaks))
                except InputError:
                    continue
    return found


def test_closure_matches_brute_force_enumeration():
    for datum, lam in [(A1, (2,)), (A1, (3,)), (A2, (1, 0)), (A2, (1, 1)),
                       (C2, (1, 0)), (C2, (0, 1)), (B2, (1, 0)), (B2, (0, 1))]:
        graph = build_crystal(datum, Weight(lam))
        assert set(graph.vertices) == brute_force_paths(datum, lam)


# -------------------------------------------------------------------- tensors


def test_tensor_of_two_strings():
    b = build_crystal(A1, Weight((1,)))
    square = tensor(b, b)
    assert len(square.vertices) == 4
    assert square.is_connected()


def test_tensor_weights_are_sums():
    b = build_crystal(A1, Weight((1,)))
    square = tensor(b, b)
    for u, v in square.vertices:
        assert square.weights[(u, v)] == b.weights[u] + b.weights[v]


def test_tensor_lowering_acts_on_left_when_right_is_exhausted():
    b = build_crystal(A1, Weight((1,)))
    square = tensor(b, b)
    top = straight_path(A1, Weight((1,)))
    low = straight_path(A1, Weight((1,)), A1.weyl.simple[0])
    assert square.f_arrows[((top, top), 1)] == (low, top)


def test_tensor_contains_the_classical_singlet():
    b = build_crystal(A1, Weight((1,)))
    square = tensor(b, b)
    top = straight_path(A1, Weight((1,)))
    low = straight_path(A1, Weight((1,)), A1.weyl.simple[0])
    assert square.eps((top, low), 1) == 0
    assert square.phi((top, low), 1) == 0


def test_tensor_requires_two_factors_sharing_a_datum():
    b = build_crystal(A1, Weight((1,)))
    with pytest.raises(InputError, match="two factors"):
        tensor(b)
    with pytest.raises(InputError, match="share"):
        tensor(b, build_crystal(A2, Weight((1, 0))))


def test_triple_tensor_associates_in_size_and_weights():
    b = build_crystal(A1, Weight((1,)))
    cube = tensor(b, b, b)
    assert len(cube.vertices) == 8
    weights = sorted(cube.weights[v].coords[0] for v in cube.vertices)
    assert weights == [-3, -1, -1, -1, 1, 1, 1, 3]


# -------------------------------------------------------------------- exports


def test_path_json_round_trips_deterministically():
    eta = path(A1, (2,), [(), (1,)], (0, Fraction(1, 2), 1))
    blob = eta.to_json_dict()
    assert blob["directions"] == [[], [1]]
    assert blob["breaks"] == ["0/1", "1/2", "1/1"]
    assert blob["weight"] == [0]
    assert blob["deg"] == -1
    assert json.dumps(blob) == json.dumps(eta.to_json_dict())


def test_crystal_exports():
    graph = build_crystal(A1, Weight((2,)))
    blob = graph.to_json_dict()
    assert len(blob["vertices"]) == 4
    assert blob["connected"] is True
    assert blob["distinguished"] == 0
    assert all({"j", "source", "target"} <= set(a) for a in blob["arrows"])
    dot = graph.to_dot()
    assert dot.startswith("digraph") and dot.endswith("}")


def test_larger_rank_two_closures_stay_consistent():
    for datum, lam in [(C2, (1, 1)), (G2, (1, 0)), (G2, (0, 1))]:
        graph = build_crystal(datum, Weight(lam))
        assert graph.is_connected()
        weights = sorted(graph.weights[v].coords for v in graph.vertices)
        for s in datum.weyl.simple:
            image = sorted(s.act_weight(graph.weights[v]).coords for v in graph.vertices)
            assert image == weights
