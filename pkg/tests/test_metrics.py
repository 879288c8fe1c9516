import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarfkit.clustering import Decomposition
from sarfkit.errors import DomainError
from sarfkit.graphs import PackageMap
from sarfkit.metrics import (
    VersionSeries,
    auth_decomposition,
    evaluate,
    max_mno,
    max_mno_brute_force,
    mno,
    mno_brute_force,
    mojo,
    mojofm,
    mojosim,
    ned,
    occupancy,
    stability,
)
from sarfkit.synthetic import random_decomposition


def blocks(*groups):
    return Decomposition.from_blocks([list(g) for g in groups])


class TestMno:
    def test_identity_is_zero(self):
        d = blocks(["a", "b"], ["c"])
        assert mno(d, d) == 0
        assert mno_brute_force(d, d) == 0

    def test_two_joins(self):
        c = blocks(["a"], ["b"], ["c"])
        a = blocks(["a", "b", "c"])
        assert mno(c, a) == 2
        assert mno_brute_force(c, a) == 2

    def test_one_move(self):
        c = blocks(["a", "b", "c"])
        a = blocks(["a", "b"], ["c"])
        assert mno(c, a) == 1
        assert mno_brute_force(c, a) == 1

    def test_universe_mismatch_rejected(self):
        with pytest.raises(DomainError):
            mno(blocks(["a"]), blocks(["b"]))

    def test_zero_iff_same_partition(self):
        rng = random.Random(9)
        for trial in range(50):
            names = [f"e{i}" for i in range(rng.randint(2, 7))]
            c = random_decomposition(names, seed=trial)
            a = random_decomposition(names, seed=5000 - trial)
            assert (mno(c, a) == 0) == c.same_partition(a)

    def test_matches_brute_force_on_random_pairs(self):
        rng = random.Random(20130612)
        for trial in range(60):
            names = [f"e{i}" for i in range(rng.randint(2, 7))]
            c = random_decomposition(names, seed=rng.randint(0, 10**6))
            a = random_decomposition(names, seed=rng.randint(0, 10**6))
            assert mno(c, a) == mno_brute_force(c, a)

    def test_brute_force_size_limit(self):
        names = [f"e{i}" for i in range(9)]
        d = blocks(names)
        with pytest.raises(DomainError):
            mno_brute_force(d, d)


class TestFig2Fixtures:
    def test_directional_counts(self, fig2_partitions):
        c, d, a = fig2_partitions
        assert mno(c, a) == 2
        assert mno(a, c) == 4
        assert mno(d, a) == 5
        assert mno(a, d) == 1

    def test_mojo(self, fig2_partitions):
        c, d, a = fig2_partitions
        assert mojo(c, a) == 2
        assert mojo(d, a) == 1
        assert mojo(a, a) == 0

    def test_mojosim(self, fig2_partitions):
        c, d, a = fig2_partitions
        assert mojosim(c, a) == 80.0
        assert mojosim(d, a) == 90.0
        assert mojosim(a, a) == 100.0

    def test_mojofm(self, fig2_partitions):
        c, d, a = fig2_partitions
        assert max_mno(a) == 8
        assert mojofm(c, a) == 75.0
        assert mojofm(d, a) == 37.5
        assert mojofm(a, a) == 100.0

    def test_coarse_partition_overestimated_by_mojosim_only(self, fig2_partitions):
        c, d, a = fig2_partitions
        assert mojosim(d, a) > mojosim(c, a)
        assert mojofm(d, a) < mojofm(c, a)


class TestMaxMno:
    def test_single_module_universe(self):
        assert max_mno(blocks(["solo"])) == 0
        assert max_mno_brute_force(blocks(["solo"])) == 0

    def test_two_cluster_fixture(self):
        # enumerated over all 5 partitions of 3 elements
        target = blocks(["x", "y"], ["z"])
        assert max_mno_brute_force(target) == 1
        assert max_mno(target) == 1

    def test_formula_matches_enumeration_for_small_shapes(self):
        shapes = [[1], [2], [1, 1], [3], [2, 1], [1, 1, 1], [4], [3, 1], [2, 2],
                  [5], [3, 2], [2, 2, 1], [6], [4, 2], [3, 3], [2, 2, 2]]
        for shape in shapes:
            names = [f"e{i}" for i in range(sum(shape))]
            groups, start = [], 0
            for size in shape:
                groups.append(names[start : start + size])
                start += size
            a = Decomposition.from_blocks(groups)
            assert max_mno(a) == max_mno_brute_force(a), shape

    def test_mno_never_exceeds_max_mno(self):
        rng = random.Random(77)
        for trial in range(40):
            names = [f"e{i}" for i in range(rng.randint(2, 8))]
            c = random_decomposition(names, seed=rng.randint(0, 10**6))
            a = random_decomposition(names, seed=rng.randint(0, 10**6))
            assert 0 <= mno(c, a) <= max_mno(a)

    def test_mojofm_undefined_for_degenerate_universe(self):
        one = blocks(["solo"])
        with pytest.raises(DomainError):
            mojofm(one, one)


@given(st.integers(min_value=2, max_value=7), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_mojosim_is_symmetric_and_bounded(n, rnd):
    names = [f"e{i}" for i in range(n)]
    c = random_decomposition(names, seed=rnd.randint(0, 10**6))
    a = random_decomposition(names, seed=rnd.randint(0, 10**6))
    value = mojosim(c, a)
    assert value == mojosim(a, c)
    assert 0.0 <= value <= 100.0


@given(st.integers(min_value=2, max_value=7), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_mojofm_is_100_iff_equal(n, rnd):
    names = [f"e{i}" for i in range(n)]
    c = random_decomposition(names, seed=rnd.randint(0, 10**6))
    a = random_decomposition(names, seed=rnd.randint(0, 10**6))
    if max_mno(a) == 0:
        return
    value = mojofm(c, a)
    assert value >= 0.0
    assert (value == 100.0) == c.same_partition(a)


class TestNed:
    def test_all_clusters_in_range(self):
        d = blocks(
            [f"a{i}" for i in range(6)],
            [f"b{i}" for i in range(6)],
            [f"c{i}" for i in range(8)],
        )
        assert ned(d) == 1.0

    def test_small_cluster_excluded(self):
        d = blocks([f"a{i}" for i in range(4)], [f"b{i}" for i in range(16)])
        assert ned(d) == 0.8

    def test_singletons_score_zero(self):
        d = blocks(*[[f"a{i}"] for i in range(10)])
        assert ned(d) == 0.0

    def test_upper_bound_uses_real_division(self):
        # N=110: bound is max(20, 22) = 22, so a 22-cluster still counts
        d = blocks([f"a{i:03d}" for i in range(22)], [f"b{i:03d}" for i in range(88)])
        assert ned(d) == 0.2

    def test_rename_invariance_and_range(self):
        d = blocks([f"a{i}" for i in range(5)], ["x"])
        renamed = Decomposition(
            clusters={"first": frozenset(f"a{i}" for i in range(5)), "second": frozenset("x")},
            universe=d.universe,
        )
        assert 0.0 <= ned(d) <= 1.0
        assert ned(d) == ned(renamed)


class TestStability:
    def test_identical_versions(self):
        d = blocks(["a", "b"], ["c"])
        series = VersionSeries(entries=(("v1", d), ("v2", d)))
        assert stability(series) == [100.0]

    def test_one_module_moved(self):
        v1 = blocks([f"a{i}" for i in range(5)], [f"b{i}" for i in range(5)])
        v2 = blocks([f"a{i}" for i in range(4)], ["a4"] + [f"b{i}" for i in range(5)])
        series = VersionSeries(entries=(("v1", v1), ("v2", v2)))
        assert stability(series) == [90.0]

    def test_three_versions_give_two_values(self):
        d = blocks(["a", "b"], ["c"])
        series = VersionSeries(entries=(("v1", d), ("v2", d), ("v3", d)))
        assert len(stability(series)) == 2

    def test_universe_restriction(self):
        v1 = blocks(["a", "b", "old"], ["c", "d", "e"])
        v2 = blocks(["a", "b"], ["c", "d", "e", "new"])
        series = VersionSeries(entries=(("v1", v1), ("v2", v2)))
        assert stability(series) == [100.0]

    def test_disjoint_universes_rejected(self):
        series = VersionSeries(entries=(("v1", blocks(["a"])), ("v2", blocks(["b"]))))
        with pytest.raises(DomainError, match="v1.*v2"):
            stability(series)

    def test_single_version_rejected(self):
        with pytest.raises(DomainError):
            stability(VersionSeries(entries=(("v1", blocks(["a"])),)))


class TestOccupancy:
    def test_half(self):
        p = PackageMap(
            assignment={f"m{i}": ("big" if i < 10 else f"p{i % 2}") for i in range(20)}
        )
        assert occupancy(p) == 50.0

    def test_single_package(self):
        p = PackageMap(assignment={"a": "pkg", "b": "pkg"})
        assert occupancy(p) == 100.0

    def test_quarter(self):
        p = PackageMap(assignment={f"m{i}": f"p{i % 4}" for i in range(20)})
        assert occupancy(p) == 25.0


class TestAuthDecomposition:
    def test_small_child_merges_into_parent(self):
        assignment = {f"x{i}": "a" for i in range(6)}
        assignment.update({f"y{i}": "a.b" for i in range(3)})
        d = auth_decomposition(PackageMap(assignment=assignment))
        assert set(d.clusters) == {"a"}
        assert len(d.clusters["a"]) == 9

    def test_large_packages_untouched(self):
        assignment = {f"x{i}": "a" for i in range(6)}
        assignment.update({f"y{i}": "b" for i in range(7)})
        d = auth_decomposition(PackageMap(assignment=assignment))
        assert set(d.clusters) == {"a", "b"}

    def test_cascading_merge_to_root(self):
        assignment = {"x0": "a", "x1": "a", "y0": "a.b", "y1": "a.b"}
        d = auth_decomposition(PackageMap(assignment=assignment))
        assert set(d.clusters) == {"a"}
        assert len(d.clusters["a"]) == 4

    def test_absent_parent_is_created(self):
        assignment = {"x0": "a.b", "x1": "a.b"}
        d = auth_decomposition(PackageMap(assignment=assignment))
        assert set(d.clusters) == {"a"}

    def test_no_mergeable_cluster_remains(self):
        rng = random.Random(55)
        roots = ["a", "b", "c"]
        for trial in range(25):
            assignment = {}
            for i in range(rng.randint(1, 40)):
                depth = rng.randint(1, 3)
                path = ".".join(rng.choice(roots) for _ in range(depth))
                assignment[f"m{i}"] = path
            d = auth_decomposition(PackageMap(assignment=assignment))
            for name, block in d.clusters.items():
                assert not ("." in name and len(block) <= 5), (name, len(block))

    def test_threshold_zero_keeps_everything(self):
        assignment = {"x0": "a.b", "x1": "a"}
        d = auth_decomposition(PackageMap(assignment=assignment), threshold=0)
        assert set(d.clusters) == {"a", "a.b"}


class TestEvaluate:
    def test_default_measures(self, fig2_partitions):
        c, _, a = fig2_partitions
        report = evaluate(c, a)
        assert report.values["mojofm"] == 75.0
        assert report.values["mojosim"] == 80.0
        assert report.n == 10
        assert report.k_computed == 4
        assert report.k_authoritative == 2
        assert report.mno_ops == 2
        assert report.n_maxops == 8

    def test_single_measure(self, fig2_partitions):
        c, _, a = fig2_partitions
        report = evaluate(c, a, measures=("ned",))
        assert set(report.values) == {"ned"}

    def test_unknown_measure_rejected(self, fig2_partitions):
        c, _, a = fig2_partitions
        with pytest.raises(DomainError):
            evaluate(c, a, measures=("edgesim",))

    def test_restrict_flag(self):
        c = blocks(["a", "b", "extra"])
        a = blocks(["a", "b"])
        with pytest.raises(DomainError):
            evaluate(c, a)
        report = evaluate(c, a, restrict=True)
        assert report.n == 2
        assert report.restricted
