import math
import random
from fractions import Fraction

import pytest

from kronset import CharacterSet
from kronset.gallery import (
    ExampleSpec,
    coset_alpha_series,
    hadamard_terms,
    make_example,
    mixed_flip_error,
    odd_bound_check,
    verify_example,
)


class TestMakeExample:
    def test_cube_set(self):
        E = make_example(ExampleSpec.z2cube())
        assert len(E) == 4
        assert not any(c.is_identity() for c in E)
        assert {c.torsion_coords for c in E} == {(0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1)}

    def test_coset_truncation(self):
        E = make_example(ExampleSpec.coset(3, 1))
        assert [c.free_coords[0] for c in E] == [-2, 1, 4]

    def test_hadamard_powers(self):
        E = make_example(ExampleSpec.hadamard(3, 4))
        assert [c.free_coords[0] for c in E] == [1, 3, 9, 27]

    def test_hadamard_fractional_ratio_keeps_gap(self):
        for q in (1.5, 2.5, 3.7):
            terms = hadamard_terms(q, 7)
            assert all(b / a >= q for a, b in zip(terms, terms[1:]))

    def test_mixed_structure(self):
        E = make_example(ExampleSpec.mixed(3))
        assert len(E) == 6
        assert E.group.free_rank == 1 and E.group.torsion_orders == (2, 2, 2)
        freqs = sorted(c.free_coords[0] for c in E)
        assert freqs == [-3, -2, -1, 1, 2, 3]

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            ExampleSpec.coset(1, 2)
        with pytest.raises(ValueError):
            ExampleSpec.mixed(0)
        with pytest.raises(ValueError):
            ExampleSpec.hadamard(1.0, 5)
        with pytest.raises(ValueError):
            ExampleSpec("nonsense")


class TestZ2CubeVerification:
    def test_all_checks_pass(self):
        rep = verify_example(ExampleSpec.z2cube())
        assert rep.passed
        names = [c.name for c in rep.checks]
        assert "obstruction target error" in names
        assert rep.data["obstruction_error_turns"] == "1/2"

    def test_exactness_is_bitwise(self):
        rep = verify_example(ExampleSpec.z2cube())
        by_name = {c.name: c for c in rep.checks}
        assert by_name["obstruction target error"].value == math.pi
        assert by_name["chordal constant"].value == 2.0
        assert by_name["grid constant, n=3"].value == 2 * math.pi / 3


class TestCosetVerification:
    def test_odd_order_series(self):
        rep = verify_example(ExampleSpec.coset(3, 4))
        assert rep.passed
        lowers = [b["lower"] for b in rep.data["brackets"]]
        assert all(b >= a for a, b in zip(lowers, lowers[1:]))
        cap = math.pi - math.pi / 3
        assert all(b["upper"] <= cap + 1e-3 for b in rep.data["brackets"])

    def test_even_order_witness(self):
        rep = verify_example(ExampleSpec.coset(4, 3), budget=200_000)
        assert rep.passed
        assert rep.data["witness_error"] <= math.pi - math.pi / 4 + 1e-12

    def test_series_seeding_monotone_under_budget(self):
        series = coset_alpha_series(3, range(1, 5), budget_per_step=30_000)
        lowers = [res.alpha.lower for _, res in series]
        assert all(b >= a for a, b in zip(lowers, lowers[1:]))

    def test_frozen_small_values(self):
        # frozen via the exhaustive oracle: K=1 -> 2*pi/5, K=2 -> 5*pi/9
        series = dict(coset_alpha_series(3, [1, 2]))
        assert series[1].alpha.upper == pytest.approx(2 * math.pi / 5, abs=1e-9)
        assert series[2].alpha.upper == pytest.approx(5 * math.pi / 9, abs=1e-9)


class TestMixedVerification:
    def test_halves_and_union(self):
        rep = verify_example(ExampleSpec.mixed(4))
        assert rep.passed
        by_name = {c.name: c for c in rep.checks}
        assert by_name["positive half"].passed
        assert by_name["negative half"].passed
        assert by_name["union"].passed

    def test_direct_search_finds_mirror_pair(self):
        # at small sizes the smallest-support search returns a mirror pair
        rep = verify_example(ExampleSpec.mixed(2))
        witness = rep.data["union_witness"]
        assert sum(1 for c in witness if c) == 2
        assert all(c in (0, 1) for c in witness)

    def test_flip_error_nondecreasing(self):
        vals = [mixed_flip_error(n)[0] for n in (2, 4, 6)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_flip_error_certificate(self):
        lower, grid_min, _ = mixed_flip_error(5)
        assert lower <= grid_min
        assert grid_min - lower <= 5 * (2 * math.pi / 10_000)


class TestHadamardVerification:
    def test_report_shape(self):
        rep = verify_example(ExampleSpec.hadamard(3, 4), budget=2_000_000)
        assert rep.passed
        assert rep.data["alpha_lower"] <= rep.data["alpha_upper"]
        small = rep.data["reading[pi/(q-1)]"]["status"]
        large = rep.data["reading[pi*(q-1)]"]["status"]
        assert small in ("holds", "violated", "undecided")
        assert large in ("holds", "violated", "undecided")

    def test_quasi_independent_for_q3(self):
        rep = verify_example(ExampleSpec.hadamard(3, 5), budget=2_000_000)
        by_name = {c.name: c for c in rep.checks}
        assert by_name["quasi-independence"].passed


class TestOddBoundCheck:
    def test_identity_set_attains_cap(self):
        E = CharacterSet.of_integers([0])
        ok, res = odd_bound_check(E, 3)
        assert ok
        assert res.alpha.lower == pytest.approx(math.pi - math.pi / 3, abs=1e-12)

    def test_random_sets_pass(self):
        rng = random.Random(79)
        for _ in range(4):
            E = CharacterSet.of_integers(rng.sample(range(-9, 10), 3))
            ok, _ = odd_bound_check(E, 5)
            assert ok

    def test_cube_attains_equality(self):
        E = make_example(ExampleSpec.z2cube())
        ok, res = odd_bound_check(E, 3)
        assert ok
        assert res.alpha.exact_turns == Fraction(1, 3)

    def test_rejects_even_order(self):
        with pytest.raises(ValueError):
            odd_bound_check(CharacterSet.of_integers([1]), 4)
