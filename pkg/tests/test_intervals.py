import itertools

import pytest
from hypothesis import given, strategies as st

from fwaudit import (
    ArityError,
    Box,
    DomainSpec,
    Interval,
    box_intersects,
    box_subtract,
    boxes_pairwise_disjoint,
    interval_intersect,
    interval_subtract,
)
from fwaudit.intervals import bounding_box

from conftest import box


def points(iv: Interval) -> set[int]:
    return set(range(iv.lo, iv.hi + 1))


def box_points(b: Box) -> set[tuple[int, ...]]:
    return set(itertools.product(*(range(iv.lo, iv.hi + 1) for iv in b.intervals)))


intervals_0_15 = st.integers(0, 15).flatmap(
    lambda lo: st.integers(lo, 15).map(lambda hi: Interval(lo, hi))
)


def boxes_st(p: int, hi: int = 7):
    one = st.integers(0, hi).flatmap(
        lambda lo: st.integers(lo, hi).map(lambda h: Interval(lo, h))
    )
    return st.tuples(*([one] * p)).map(Box)


class TestInterval:
    def test_inverted_rejected(self):
        with pytest.raises(ValueError):
            Interval(5, 4)

    def test_intersect_overlap(self):
        assert interval_intersect(Interval(20, 60), Interval(1, 30)) == Interval(20, 30)

    def test_intersect_disjoint(self):
        assert interval_intersect(Interval(1, 50), Interval(80, 100)) is None

    def test_intersect_point_identity(self):
        assert interval_intersect(Interval(5, 5), Interval(5, 5)) == Interval(5, 5)

    def test_subtract_leading_overlap(self):
        assert interval_subtract(Interval(1, 50), Interval(1, 30)) == [Interval(31, 50)]

    def test_subtract_disjoint(self):
        assert interval_subtract(Interval(1, 50), Interval(60, 90)) == [Interval(1, 50)]

    def test_subtract_middle_split(self):
        assert interval_subtract(Interval(1, 50), Interval(10, 40)) == [
            Interval(1, 9),
            Interval(41, 50),
        ]

    def test_subtract_self_is_empty(self):
        assert interval_subtract(Interval(3, 9), Interval(3, 9)) == []

    @given(intervals_0_15, intervals_0_15)
    def test_intersect_matches_set_semantics(self, a, b):
        got = interval_intersect(a, b)
        expected = points(a) & points(b)
        assert (set() if got is None else points(got)) == expected

    @given(intervals_0_15, intervals_0_15)
    def test_subtract_matches_set_semantics(self, b, a):
        got = interval_subtract(b, a)
        assert len(got) <= 2
        covered = set()
        for piece in got:
            ps = points(piece)
            assert not (ps & covered)
            covered |= ps
        assert covered == points(b) - points(a)
        assert got == sorted(got, key=lambda iv: iv.lo)


class TestBox:
    def test_intersects_overlapping(self):
        assert box_intersects(box((1, 30), (20, 45)), box((20, 60), (25, 35)))

    def test_intersects_disjoint_attribute(self):
        assert not box_intersects(box((1, 50), (1, 50)), box((80, 100), (1, 50)))

    def test_intersects_self(self):
        b = box((3, 7), (2, 9))
        assert box_intersects(b, b)

    def test_arity_mismatch(self):
        with pytest.raises(ArityError):
            box_intersects(box((1, 2)), box((1, 2), (3, 4)))
        with pytest.raises(ArityError):
            box_subtract(box((1, 2)), box((1, 2), (3, 4)))

    def test_subtract_single_slab(self):
        got = box_subtract(box((1, 50), (1, 50)), box((1, 60), (1, 30)))
        assert got == [box((1, 50), (31, 50))]

    def test_subtract_four_slabs_in_trace_order(self):
        got = box_subtract(box((1, 50), (1, 50)), box((10, 40), (20, 30)))
        assert got == [
            box((1, 9), (1, 50)),
            box((41, 50), (1, 50)),
            box((10, 40), (1, 19)),
            box((10, 40), (31, 50)),
        ]

    def test_subtract_covered_is_empty(self):
        assert box_subtract(box((1, 50), (1, 50)), box((1, 60), (1, 60))) == []

    def test_subtract_disjoint_returns_operand(self):
        b = box((1, 10), (1, 10))
        assert box_subtract(b, box((20, 30), (1, 10))) == [b]

    def test_subtract_self_is_empty(self):
        b = box((2, 6), (3, 8))
        assert box_subtract(b, b) == []

    @pytest.mark.parametrize("p", [1, 2, 3])
    @given(data=st.data())
    def test_subtract_coverage_disjointness_cardinality(self, p, data):
        b = data.draw(boxes_st(p))
        a = data.draw(boxes_st(p))
        got = box_subtract(b, a)
        assert len(got) <= 2 * p
        covered = set()
        for piece in got:
            ps = box_points(piece)
            assert not (ps & covered), "pieces overlap"
            covered |= ps
        assert covered == box_points(b) - box_points(a)

    @given(boxes_st(2), boxes_st(2))
    def test_subtract_deterministic(self, b, a):
        assert box_subtract(b, a) == box_subtract(b, a)


class TestHelpers:
    def test_pairwise_disjoint(self):
        assert boxes_pairwise_disjoint([box((1, 2), (1, 2)), box((3, 4), (1, 2))])
        assert not boxes_pairwise_disjoint([box((1, 3), (1, 2)), box((3, 4), (1, 2))])
        assert boxes_pairwise_disjoint([])

    def test_bounding_box(self):
        assert bounding_box([]) is None
        hull = bounding_box([box((1, 2), (5, 9)), box((4, 8), (0, 3))])
        assert hull == box((1, 8), (0, 9))


class TestDomainSpec:
    def test_five_tuple_shape(self):
        dom = DomainSpec.five_tuple()
        assert dom.p == 5
        assert dom.names == ("protocol", "source", "sport", "destination", "dport")
        assert dom.attributes[1].hi == 2**32 - 1

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            DomainSpec.of(("s", 0, 9), ("s", 0, 9))

    def test_size(self):
        assert DomainSpec.of(("s", 1, 100), ("d", 1, 100)).size() == 10_000

    def test_check_box_bounds(self):
        dom = DomainSpec.of(("s", 0, 9))
        dom.check_box(box((0, 9)))
        with pytest.raises(Exception):
            dom.check_box(box((0, 10)))
