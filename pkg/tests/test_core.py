import random

import pytest

from diverseflow import convex
from diverseflow.core import (
    BOT,
    TOP,
    KPotential,
    PosetDag,
    ReductionMap,
    SolutionTuple,
    build_instance,
    check_potential,
    convex_penalty,
    diversity_cov,
    diversity_sum,
    potential_cost,
    solution_from_ideal,
    solutions_from_potential,
    validate_potential,
)

import helpers


class TestPosetDag:
    def test_minimal_poset(self):
        p = PosetDag(2, ((TOP, BOT),))
        assert p.reaches(TOP, BOT)
        assert not p.reaches(BOT, TOP)

    def test_rejects_multiple_sources(self):
        with pytest.raises(ValueError, match="source"):
            PosetDag(3, ((TOP, BOT), (2, BOT)))

    def test_rejects_cycle(self):
        with pytest.raises(ValueError):
            PosetDag(4, ((TOP, 2), (2, 3), (3, 2), (2, BOT), (3, BOT)))

    def test_rejects_swapped_terminals(self):
        with pytest.raises(ValueError):
            PosetDag(2, ((BOT, TOP),))

    def test_ideal_validation_witness(self):
        p = PosetDag(4, ((TOP, 2), (2, 3), (3, BOT)))
        assert p.validate_ideal({3}) is None
        assert p.validate_ideal({2, 3}) is None
        assert p.validate_ideal({2}) == (2, 3)


class TestSolutionFromIdeal:
    def test_single_bot_top_element(self):
        p = PosetDag(2, ((TOP, BOT),))
        r = ReductionMap.normalize([(BOT, TOP)], p)
        assert solution_from_ideal(frozenset(), r, p) == {0}

    def test_g2_empty_ideal_gives_source_cut(self):
        p = helpers.g2_poset()
        r = helpers.g2_reduction(p)
        assert solution_from_ideal(frozenset(), r, p) == {0}  # {sa}

    def test_g2_full_ideal_gives_sink_cut(self):
        p = helpers.g2_poset()
        r = helpers.g2_reduction(p)
        assert solution_from_ideal(frozenset({2}), r, p) == {1}  # {at}

    def test_rejects_non_ideal(self):
        p = PosetDag(4, ((TOP, 2), (2, 3), (3, BOT)))
        r = ReductionMap.normalize([(3, 2)], p)
        with pytest.raises(ValueError, match="not an ideal"):
            solution_from_ideal({2}, r, p)


class TestReductionMap:
    def test_degenerate_elements_dropped(self):
        p = helpers.g2_poset()
        r = ReductionMap.normalize([(2, 2), (BOT, 2)], p)
        assert r.dropped == (0,)
        assert r.kept == (1,)
        assert r.size == 1

    def test_rejects_unreachable_pair(self):
        p = helpers.g1_poset()
        with pytest.raises(ValueError, match="not reachable"):
            ReductionMap.normalize([(2, 3)], p)  # blocks a,b incomparable

    def test_rejects_out_of_range(self):
        p = helpers.g2_poset()
        with pytest.raises(ValueError, match="outside poset"):
            ReductionMap.normalize([(0, 9)], p)


class TestBuildInstance:
    def test_g2_shape(self):
        p = helpers.g2_poset()
        r = helpers.g2_reduction(p)
        inst = build_instance(p, r, convex.square(2), 2)
        assert inst.arcs[: inst.n_structural] == p.arcs
        weighted = [(a, w) for a, w in zip(inst.arcs, inst.weights) if w]
        assert sorted(weighted) == [((TOP, 2), 1), ((2, BOT), 1)]

    def test_empty_ground_set(self):
        p = helpers.g2_poset()
        r = ReductionMap.normalize([], p)
        inst = build_instance(p, r, convex.square(2), 2)
        assert all(w == 0 for w in inst.weights)
        for pot in helpers.enum_potentials(inst):
            assert potential_cost(pot, inst) == 0

    def test_multiplicity_merged(self):
        p = helpers.g2_poset()
        r = ReductionMap.normalize([(BOT, 2), (BOT, 2)], p)
        inst = build_instance(p, r, convex.square(2), 2)
        weighted = [(a, w) for a, w in zip(inst.arcs, inst.weights) if w]
        assert weighted == [((2, BOT), 2)]


class TestPotential:
    def make(self, k=2):
        p = helpers.g2_poset()
        r = helpers.g2_reduction(p)
        return build_instance(p, r, convex.square(k), k)

    def test_constant_except_top_is_valid(self):
        inst = self.make()
        assert check_potential(KPotential((2, 0, 2)), inst) is None

    def test_p1_violation(self):
        inst = self.make()
        v = check_potential(KPotential((1, 0, 1)), inst)
        assert v is not None and v.condition == "P1"

    def test_p2_violation(self):
        inst = self.make()
        v = check_potential(KPotential((2, 0, 3)), inst)
        assert v is not None and v.condition == "P2"

    def test_p3_violation_names_arc(self):
        p = PosetDag(4, ((TOP, 2), (2, 3), (3, BOT)))
        inst = build_instance(p, ReductionMap.normalize([], p), convex.square(2), 2)
        v = check_potential(KPotential((2, 0, 0, 1)), inst)
        assert v is not None and v.condition == "P3" and "(2,3)" in v.detail

    def test_midpoint_is_valid(self):
        inst = self.make()
        assert check_potential(KPotential((2, 0, 1)), inst) is None


class TestPotentialCost:
    def test_g2_square_scan(self):
        inst = TestPotential().make()
        costs = {p.values[2]: potential_cost(p, inst) for p in helpers.enum_potentials(inst)}
        assert costs == {0: 4, 1: 2, 2: 4}

    def test_invalid_potential_rejected(self):
        inst = TestPotential().make()
        with pytest.raises(ValueError):
            potential_cost(KPotential((0, 0, 0)), inst)


class TestSolutionsFromPotential:
    def test_g2_midpoint(self):
        p = helpers.g2_poset()
        r = helpers.g2_reduction(p)
        inst = build_instance(p, r, convex.square(2), 2)
        t = solutions_from_potential(KPotential((2, 0, 1)), r, inst)
        assert t.sets == (frozenset({1}), frozenset({0}))  # S1={at}, S2={sa}

    def test_full_range_element(self):
        p = PosetDag(2, ((TOP, BOT),))
        r = ReductionMap.normalize([(BOT, TOP)], p)
        k = 3
        inst = build_instance(p, r, convex.square(k), k)
        t = solutions_from_potential(KPotential((3, 0)), r, inst)
        assert all(s == {0} for s in t.sets)
        assert t.multiplicity[0] == k

    def test_equal_potentials_give_empty_sets(self):
        p = helpers.g2_poset()
        r = ReductionMap.normalize([], p)
        inst = build_instance(p, r, convex.square(2), 2)
        t = solutions_from_potential(KPotential((2, 0, 1)), r, inst)
        assert all(not s for s in t.sets)
        assert t.q == 0


class TestDiversity:
    def test_k1_sum_is_zero(self):
        assert diversity_sum(SolutionTuple((frozenset({0, 1}),))) == 0

    def test_two_disjoint_singletons(self):
        t = SolutionTuple((frozenset({0}), frozenset({1})))
        assert diversity_sum(t) == 2
        assert diversity_cov(t) == 2
        assert convex_penalty(t, convex.square(2)) == 2

    def test_g1_opposite_cuts(self):
        t = SolutionTuple((frozenset({0, 1}), frozenset({2, 3})))
        assert diversity_sum(t) == 4
        assert diversity_cov(t) == 4

    def test_sum_identity_on_ragged_tuples(self):
        rng = random.Random(7)
        for _ in range(50):
            k = rng.randint(1, 4)
            sets = tuple(frozenset(rng.sample(range(6), rng.randint(0, 5))) for _ in range(k))
            diversity_sum(SolutionTuple(sets))  # internal cross-check must agree


class TestRoundTripIdentity:
    def test_cost_equals_penalty_exhaustively(self):
        rng = random.Random(42)
        for _ in range(60):
            poset = helpers.random_poset(rng, 3)
            rmap = helpers.random_reduction(rng, poset, rng.randint(0, 5))
            k = rng.randint(1, 3)
            inst = build_instance(poset, rmap, helpers.random_convex(rng, k), k)
            for p in helpers.enum_potentials(inst):
                t = solutions_from_potential(p, rmap, inst)
                assert potential_cost(p, inst) == convex_penalty(t, inst.convex)
                for e in range(rmap.size):
                    drop = p.values[rmap.eplus[e]] - p.values[rmap.eminus[e]]
                    assert t.multiplicity[e] == drop

    def test_equal_size_property_on_chain_families(self):
        rng = random.Random(11)
        for _ in range(40):
            poset = helpers.random_poset(rng, 3)
            rmap = helpers.random_chain_reduction(rng, poset, rng.randint(1, 3))
            k = rng.randint(1, 3)
            inst = build_instance(poset, rmap, convex.square(k), k)
            for p in helpers.enum_potentials(inst):
                t = solutions_from_potential(p, rmap, inst)
                t.q  # raises if sets are ragged

    def test_ideal_level_sets_round_trip(self):
        # decoding a potential built from ideals returns those ideals' solutions
        rng = random.Random(3)
        for _ in range(30):
            poset = helpers.random_poset(rng, 3)
            rmap = helpers.random_reduction(rng, poset, 4)
            k = 2
            inst = build_instance(poset, rmap, convex.square(k), k)
            from diverseflow.oracle import enum_ideals

            ideals = enum_ideals(poset)
            for i1 in ideals:
                for i2 in ideals:
                    if not i1 <= i2:
                        continue
                    values = [0] * poset.n
                    for v in range(poset.n):
                        values[v] = sum(1 for ideal in (i1, i2) if v in ideal or v == BOT)
                    p = KPotential(tuple(values))
                    validate_potential(p, inst)
                    t = solutions_from_potential(p, rmap, inst)
                    assert t.sets[1] == solution_from_ideal(i1, rmap, poset)
                    assert t.sets[0] == solution_from_ideal(i2, rmap, poset)
