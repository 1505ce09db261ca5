import random

import pytest

from otkit.embeddings import EmbeddingTable
from otkit.intmat import hnf
from otkit.orders import build_order, maximalize
from otkit.polynomials import IntPolynomial, resultant
from otkit.roots import isolate_roots
from otkit.unitgroup import (InsufficientUnitsError, certify_units, find_units,
                             j_ideal, torsion_group, totally_positive_generators,
                             unit_group, units_from_generators)

P = IntPolynomial


def test_find_units_examples():
    po = build_order(P.parse("T^3 + T^2 - 1")).power_suborder()
    us = find_units(po, 2)
    assert po.tbar() in us
    po2 = build_order(P.parse("T^3 + T + 1")).power_suborder()
    us2 = find_units(po2, 2)
    coords = {u.coords for u in us2}
    assert (0, 1, 0) in coords or (0, -1, 0) in coords
    assert po.one() in find_units(po, 1)


def test_certified_regulator_disc23(disc23):
    order, index, cert, ug = disc23
    assert index == 1 and cert
    assert ug.certified_index_bound == 1
    assert abs(float(ug.regulator.mid()) - 0.28119957432) < 1e-9
    assert float(ug.regulator.rad()) < 1e-12


def test_square_submission_recovers_generator(disc23):
    order, _, _, ug = disc23
    u = ug.generators[0]
    squared = certify_units(order, [u * u], table=ug.table)
    assert squared.certified_index_bound == 1
    assert squared.regulator.overlaps(ug.regulator)


def test_insufficient_candidates_rejected(disc23):
    order, _, _, ug = disc23
    with pytest.raises(InsufficientUnitsError):
        certify_units(order, [order.one()], table=ug.table)


def test_totally_positive_examples():
    # T^3+T^2-1: the generator is already positive at the real place
    order, _, _, ug = _field("T^3 + T^2 - 1")
    tp = ug.totally_positive_generators[0]
    assert ug.table.sign_vector(tp) == [0]
    po = build_order(P.parse("T^3 + T + 1")).power_suborder()
    emb = isolate_roots(P.parse("T^3 + T + 1"))
    table = EmbeddingTable(po, emb)
    s_elt = po.tbar()
    tp2 = totally_positive_generators(po, table, [s_elt])
    # the root is negative, so the positive generator is -S
    assert tp2[0] == -s_elt
    assert table.sign_vector(tp2[0]) == [0]


def _field(text):
    from conftest import field_data

    return field_data(text)


def test_j_ideal_examples():
    order, _, _, ug = _field("T^3 + T^2 - 1")
    J = j_ideal(order, ug.totally_positive_generators)
    assert J.norm == 1
    # F_5: the two sign conventions give 5 and 19
    order5, _, _, ug5 = _field("T^3 - T + 5")
    g = ug5.totally_positive_generators[0]
    assert j_ideal(order5, [g]).norm == 5
    assert j_ideal(order5, [-g]).norm == 19


def test_j_ideal_rejects_trivial(disc23):
    order, _, _, _ = disc23
    with pytest.raises(ValueError):
        j_ideal(order, [])
    with pytest.raises(ValueError):
        j_ideal(order, [order.one()])


def test_torsion_examples():
    order, _, _, ug = _field("T^3 - 2*T - 7")
    tg = torsion_group(order, ug.totally_positive_generators)
    assert tg.order_of_torsion == 1526  # 2 * 7 * 109
    order1, _, _, ug1 = _field("T^3 - T + 1")
    tg1 = torsion_group(order1, ug1.totally_positive_generators)
    assert tg1.order_of_torsion == 1 and tg1.factors == []


def test_j_is_module_and_matches_torsion(f2_field):
    order, _, _, ug = f2_field
    gens = ug.totally_positive_generators
    J = j_ideal(order, gens)
    assert J.module_closed()
    assert J.norm == torsion_group(order, gens).order_of_torsion == 4


def test_curiosity_norm_identity():
    # s = t = 1: |J(tp)| = |N(1 - g)|, cross-checked through the resultant
    for text in ("T^3 - T + 2", "T^3 - 2*T - 5", "T^3 + 8*T - 4"):
        order, _, _, ug = _field(text)
        g = ug.totally_positive_generators[0]
        J = j_ideal(order, [g])
        norm_direct = abs(order.norm(order.one() - g))
        cp = order.char_poly(g)
        norm_res = abs(resultant(cp, P([1, -1])))
        assert J.norm == norm_direct == norm_res


def test_generator_set_independence(f2_field):
    order, _, _, ug = f2_field
    eps = ug.totally_positive_generators[0]
    J1 = j_ideal(order, [eps])
    J2 = j_ideal(order, [order.inverse_unit(eps)])
    J3 = j_ideal(order, [eps, eps * eps])
    assert J1.basis == J2.basis == J3.basis


def test_sum_of_ideals_is_j_of_product():
    rng = random.Random(99)
    pool = ["T^3 - T + 2", "T^3 - T + 5", "T^3 - 2*T - 6", "T^3 + 8*T - 4"]
    for _ in range(12):
        order, _, _, ug = _field(rng.choice(pool))
        u = ug.totally_positive_generators[0]
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        U, V = [u ** a], [u ** b]
        JU, JV = j_ideal(order, U), j_ideal(order, V)
        stacked = [ru + rv for ru, rv in zip(JU.basis, JV.basis)]
        sum_basis = hnf(stacked)
        JUV = j_ideal(order, U + V)
        assert sum_basis == JUV.basis


def test_regulator_invariance_under_recombination(quartic275):
    order, _, _, ug = quartic275
    assert len(ug.generators) == 2
    g1, g2 = ug.generators
    recombined = units_from_generators(order, [g1 * g2, g2], table=ug.table)
    assert recombined.regulator.overlaps(ug.regulator)


def test_quartic_certification(quartic275):
    order, index, cert, ug = quartic275
    assert abs(order.disc) == 275
    assert ug.certified_index_bound == 1
    # published: volume 0.07174 = (3/256) sqrt(275) R  =>  R ~ 0.36921
    assert abs(float(ug.regulator.mid()) - 0.36921) < 5e-5


def test_units_from_generators_unreduced():
    f = P([-1, 8, 0, 1])  # unit index 2 over the maximal order
    po = build_order(f).power_suborder()
    emb = isolate_roots(f)
    table = EmbeddingTable(po, emb)
    supplied = units_from_generators(po, [po.tbar()], table=table)
    assert supplied.certified_index_bound == 0
    full = unit_group(maximalize(build_order(f))[0])
    ratio = float(supplied.regulator.mid()) / float(full.regulator.mid())
    assert abs(ratio - 2) < 1e-9


def test_big_regulator_field_certified():
    order, index, cert, ug = _field("T^3 + 2*T + 2000")
    assert index == 2
    assert ug.certified_index_bound == 1
    assert abs(float(ug.regulator.mid()) - 62.2798080973) < 1e-6
    J = j_ideal(order, ug.totally_positive_generators)
    assert J.norm == 2 ** 2 * 5 ** 2 * 7 * 967 * 1649120827309715616889


def test_unit_group_escalates_from_low_precision():
    # at 128 bits the sweep's enclosures can touch zero; the pipeline must
    # escalate instead of crashing
    from otkit.config import precision

    with precision(128):
        order, _, _ = maximalize(build_order(P.parse("T^3 + 2*T + 2000")))
        ug = unit_group(order)
    assert ug.certified_index_bound == 1
    assert abs(float(ug.regulator.mid()) - 62.2798080973) < 1e-6
