"""Shared strategies and oracles for the test suite."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from ekrcross.setfam import Family, Subset


def subsets(max_n: int = 10):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.integers(min_value=0, max_value=(1 << n) - 1).map(
            lambda m: Subset(n, m)
        )
    )


def families(max_n: int = 8, max_size: int = 12):
    def build(n):
        return st.lists(
            st.integers(min_value=0, max_value=(1 << n) - 1),
            min_size=0,
            max_size=max_size,
        ).map(lambda ms: Family(n, tuple(sorted(set(ms))), None))

    return st.integers(min_value=1, max_value=max_n).flatmap(build)


def small_ps():
    return st.sampled_from(
        [Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(2, 7), Fraction(1, 15)]
    )


def naive_cross_t(a: Family, b: Family, t: int) -> bool:
    """Quadratic oracle straight from the definition, via member tuples."""
    for sa in a.member_sets():
        for sb in b.member_sets():
            if len(set(sa) & set(sb)) < t:
                return False
    return True
