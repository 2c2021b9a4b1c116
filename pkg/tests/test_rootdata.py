import pytest

from spincm.errors import ConfigurationError
from spincm.rootdata import (build_root_system, conjugate_partition, exponent_data, height,
                             negate, partitions_conjugate, root_span, validate_closed_subset,
                             verify_shephard_todd)

KNOWN_EXPONENTS = {
    ("A", 1): (1,), ("A", 2): (1, 2), ("A", 3): (1, 2, 3), ("A", 4): (1, 2, 3, 4),
    ("B", 2): (1, 3), ("B", 3): (1, 3, 5), ("C", 2): (1, 3), ("C", 3): (1, 3, 5),
    ("D", 4): (1, 3, 3, 5), ("G", 2): (1, 5), ("F", 4): (1, 5, 7, 11),
    ("E", 6): (1, 4, 5, 7, 8, 11),
}


@pytest.mark.parametrize("letter,rank", sorted(KNOWN_EXPONENTS))
def test_exponents_match_tables(letter, rank):
    rs = build_root_system(letter, rank)
    ed = exponent_data(rs)
    assert tuple(ed.exponents) == KNOWN_EXPONENTS[(letter, rank)]
    assert tuple(ed.degrees) == tuple(m + 1 for m in ed.exponents)
    assert ed.coxeter_number == max(ed.exponents) + 1
    assert partitions_conjugate(ed)
    st = verify_shephard_todd(ed, rs)
    assert st.sum_exponents == st.n_positive_roots == st.half_dim_minus_rank


def test_height_counts_b_j():
    ed = exponent_data(build_root_system("A", 2))
    assert tuple(ed.b) == (2, 1)                  # heights 1, 1, 2
    ed = exponent_data(build_root_system("B", 2))
    assert tuple(ed.b) == (2, 1, 1)


def test_conjugate_partition():
    assert conjugate_partition([3, 1]) == (2, 1, 1)
    assert conjugate_partition(conjugate_partition([5, 3, 3, 1])) == (5, 3, 3, 1)


def test_root_system_is_closed_under_negation():
    rs = build_root_system("C", 3)
    roots = set(rs.positive_roots) | {negate(a) for a in rs.positive_roots}
    assert all(negate(a) in roots for a in roots)
    assert max(height(a) for a in rs.positive_roots) == exponent_data(rs).coxeter_number - 1


def test_root_span_of_simple_subset_is_closed():
    rs = build_root_system("A", 3)
    span = root_span(rs, [0, 1])
    assert len(span) == 6                          # an A2 subsystem
    assert validate_closed_subset(rs, span)


@pytest.mark.parametrize("letter,rank", [("A", 0), ("B", 1), ("D", 3), ("G", 3), ("X", 2)])
def test_invalid_types_rejected(letter, rank):
    with pytest.raises(ConfigurationError):
        build_root_system(letter, rank)
