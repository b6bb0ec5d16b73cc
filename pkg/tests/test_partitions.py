import pytest

from shapedspectra.partitions import (
    BlockMap, Partition, PartitionError, conjugate, contains_cell, dilate,
    is_minimal, null_space_dim, parse_partition, self_conjugate_from_heights)

from conftest import height_vectors, partitions_in_box, transpose_parts


def test_parse_multirectangular_example():
    p = parse_partition("9,9,7,7,7,2,2")
    assert p.heights == (2, 3, 2)
    assert p.bases == (9, 7, 2)
    assert p.length == 7
    assert p.size == 43
    assert p.block_map.values == (1, 1, 2, 2, 2, 3, 3)


def test_parse_single_box():
    p = parse_partition("1")
    assert p.heights == (1,) and p.bases == (1,)
    assert p.length == 1 and p.size == 1


def test_parse_tolerates_spaces():
    assert parse_partition(" 3, 3 ,2 ") == parse_partition("3,3,2")


@pytest.mark.parametrize("text,message", [
    ("9,7,9", "increasing at index 3"),
    ("", "empty"),
    ("3,0,1", "non-positive part at index 2"),
    ("2,x", "non-integer"),
])
def test_parse_errors(text, message):
    with pytest.raises(PartitionError, match=message):
        parse_partition(text)


def test_conjugate_examples():
    assert conjugate(parse_partition("6,3,3,1,1,1")).parts == (6, 3, 3, 1, 1, 1)
    assert conjugate(parse_partition("9,9,7,7,7,2,2")).parts == \
        (7, 7, 5, 5, 5, 5, 5, 2, 2)
    assert conjugate(parse_partition("1")).parts == (1,)


def test_conjugate_matches_box_transpose_and_involution():
    for parts in partitions_in_box(10, 10):
        p = Partition(parts)
        q = conjugate(p)
        assert q.parts == transpose_parts(parts)
        assert conjugate(q) == p


def test_self_conjugate_from_heights_examples():
    assert self_conjugate_from_heights((1, 2, 3)).parts == (6, 3, 3, 1, 1, 1)
    assert self_conjugate_from_heights((1, 1, 1)).parts == (3, 2, 1)
    assert self_conjugate_from_heights((2, 1)).parts == (3, 3, 2)


def test_self_conjugate_from_heights_always_self_conjugate():
    for a in height_vectors(6):
        p = self_conjugate_from_heights(a)
        assert p.is_self_conjugate()
        assert p.heights == a


def test_self_conjugate_from_heights_errors():
    with pytest.raises(PartitionError):
        self_conjugate_from_heights(())
    with pytest.raises(PartitionError):
        self_conjugate_from_heights((2, 0))


def test_contains_cell_examples():
    p = self_conjugate_from_heights((1, 2, 3))
    assert contains_cell(p, 2, 3) is True
    assert contains_cell(p, 2, 4) is False
    assert contains_cell(parse_partition("1"), 1, 1) is True


def test_contains_cell_errors():
    p = self_conjugate_from_heights((1, 2, 3))
    with pytest.raises(PartitionError, match="out of range"):
        contains_cell(p, 0, 1)
    with pytest.raises(PartitionError, match="out of range"):
        contains_cell(p, 1, 7)
    with pytest.raises(PartitionError, match="self-conjugate"):
        contains_cell(parse_partition("3,1"), 1, 1)


def test_block_criterion_equivalence_exhaustive():
    # contains_cell itself cross-checks the two criteria and raises on mismatch
    for a in height_vectors(8):
        p = self_conjugate_from_heights(a)
        for i in range(1, p.length + 1):
            for j in range(1, p.length + 1):
                assert contains_cell(p, i, j) == (j <= p.parts[i - 1])


def test_dilate():
    assert dilate(parse_partition("2,1"), 2).parts == (4, 4, 2, 2)
    assert dilate(parse_partition("1"), 3).parts == (3, 3, 3)
    p = parse_partition("3,3,2")
    assert dilate(p, 1) == p
    d = dilate(p, 4)
    assert d.size == 16 * p.size and d.length == 4 * p.length
    with pytest.raises(PartitionError):
        dilate(p, 0)


def test_dilate_composes():
    for parts in [(2, 1), (3, 3, 2), (5, 1, 1, 1, 1)]:
        p = Partition(parts)
        assert dilate(p, 6) == dilate(dilate(p, 2), 3)
        assert dilate(p, 6) == dilate(dilate(p, 3), 2)


def test_is_minimal():
    assert not is_minimal(parse_partition("4,4,2,2"))
    assert is_minimal(parse_partition("2,1"))
    assert is_minimal(parse_partition("3,3,2"))
    # for self-conjugate shapes minimality is gcd of the heights
    from math import gcd
    for a in height_vectors(6):
        p = self_conjugate_from_heights(a)
        g = 0
        for v in a:
            g = gcd(g, v)
        assert is_minimal(p) == (g == 1)


def test_null_space_dim_examples():
    for r in range(1, 7):
        stair = self_conjugate_from_heights((1,) * r)
        assert null_space_dim(stair) == 0
    assert null_space_dim(parse_partition("4,1,1,1")) == 2
    assert null_space_dim(parse_partition("3,3,2")) == 0
    with pytest.raises(PartitionError):
        null_space_dim(parse_partition("3,1"))


def test_null_space_dim_formulas_agree_exhaustively():
    # the operation raises when the row formula and block formula disagree
    for a in height_vectors(8):
        null_space_dim(self_conjugate_from_heights(a))


def test_multirectangular_round_trip():
    for parts in partitions_in_box(7, 7):
        p = Partition(parts)
        rebuilt = []
        for h, b in zip(p.heights, p.bases):
            rebuilt.extend([b] * h)
        assert tuple(rebuilt) == p.parts
        assert sum(p.heights) == p.length
        assert sum(h * b for h, b in zip(p.heights, p.bases)) == p.size
        assert all(b1 > b2 for b1, b2 in zip(p.bases, p.bases[1:]))


def test_block_map_validation():
    with pytest.raises(PartitionError):
        BlockMap(())
    with pytest.raises(PartitionError):
        BlockMap((1, 2, 1))
    with pytest.raises(PartitionError):
        BlockMap((1, 3))
    bm = BlockMap((1, 1, 2))
    assert bm(1) == 1 and bm(3) == 2 and bm.blocks == 2
