import pytest

from shapedspectra.partitions import parse_partition, self_conjugate_from_heights
from shapedspectra.enumeration import (BudgetError, PlaneTree,
                                       count_recurrence, iter_trees)
from shapedspectra.dyckpaths import (DyckPath, count_paths, path_to_tree,
                                     tree_to_path, validate_path)

from conftest import height_vectors

FIG_TREE = PlaneTree((3, 1, 0, 2, 2, 0, 0, 0, 0), (1, 3, 2, 1, 2, 3, 2, 4, 6))
FIG_PATH_STEPS = [
    (1, 6, 0), (1, 3, 1), (2, 3, 2), (2, 3, 1), (1, 3, 0), (1, 1, 1),
    (2, 1, 2), (2, 3, 3), (2, 3, 2), (2, 2, 3), (2, 2, 2), (2, 1, 1),
    (4, 1, 2), (4, 1, 1), (1, 1, 0), (1, 6, 1), (1, 6, 0)]


def fig_shape():
    return self_conjugate_from_heights((1, 2, 3))


def test_figure_path_is_valid():
    check = validate_path(fig_shape(), DyckPath(FIG_PATH_STEPS))
    assert check.ok


def test_figure_tree_converts_to_figure_path():
    path = tree_to_path(fig_shape(), FIG_TREE)
    assert list(path.steps) == FIG_PATH_STEPS


def test_figure_path_converts_back():
    assert path_to_tree(fig_shape(), DyckPath(FIG_PATH_STEPS)) == FIG_TREE


def test_single_box_paths_stay_put():
    p = parse_partition("1")
    heights = (0, 1, 2, 1, 2, 1, 0)
    path = DyckPath([(1, 1, h) for h in heights])
    assert validate_path(p, path).ok
    tree = path_to_tree(p, path)
    assert set(tree.labels) == {1}
    assert tree_to_path(p, tree) == path


def test_two_vertex_tree_path():
    p = parse_partition("3,3,2")
    tree = PlaneTree((1, 0), (1, 3))
    path = tree_to_path(p, tree)
    assert list(path.steps) == [(1, 3, 0), (1, 3, 1), (1, 3, 0)]
    assert path_to_tree(p, path) == tree


def test_zero_length_conventions():
    p = parse_partition("2,1")
    on_diag = tree_to_path(p, PlaneTree((0,), (1,)))
    assert on_diag.steps == ((1, 1, 0),) and on_diag.label is None
    off_diag = tree_to_path(p, PlaneTree((0,), (2,)))
    assert off_diag.steps == () and off_diag.label == 2
    assert path_to_tree(p, on_diag) == PlaneTree((0,), (1,))
    assert path_to_tree(p, off_diag) == PlaneTree((0,), (2,))
    assert validate_path(p, off_diag).ok
    assert not validate_path(p, DyckPath([], label=9)).ok


@pytest.mark.parametrize("steps,needle,malformed", [
    ([(1, 1, 0), (1, 2, 1)], "odd number", True),
    ([(1, 1, 0), (1, 2, 2), (1, 2, 1)], "increment", True),
    ([(3, 3, 0), (3, 1, 1), (3, 1, 0)], "not a box", False),
    ([(1, 1, 0), (2, 1, 1), (2, 1, 0)], "row changed", False),
    ([(1, 2, 0), (1, 1, 1), (2, 1, 2), (2, 1, 1), (1, 2, 0)],
     "column changed", False),
    ([(1, 1, 1), (1, 1, 2), (1, 1, 1)], "start at 0", False),
    ([(1, 1, 0), (1, 1, 1), (1, 1, 2)], "end at 0", False),
    ([(1, 1, 0), (1, 2, 1), (1, 2, 0)], "differ", False),
])
def test_validate_path_reports_violations(steps, needle, malformed):
    p = parse_partition("3,3,2")
    check = validate_path(p, DyckPath(steps))
    assert not check.ok
    assert needle in check.reason
    assert check.malformed == malformed


def test_validate_path_negative_height_is_rejected():
    # crafted list with a -1 height; also hits the height floor clause
    p = parse_partition("1")
    check = validate_path(
        p, DyckPath([(1, 1, 0), (1, 1, -1), (1, 1, 0)]))
    assert not check.ok


def test_unbalanced_excursion_reported_with_interval():
    p = parse_partition("3,3,2")
    bad = DyckPath([(1, 1, 0), (1, 2, 1), (3, 2, 0), (3, 1, 1), (1, 1, 0)])
    check = validate_path(p, bad)
    assert not check.ok
    assert "unbalanced excursion at [0,2]" in check.reason
    assert check.time == 2


def test_roundtrip_and_counts_small():
    for a in height_vectors(3):
        p = self_conjugate_from_heights(a)
        counts = count_recurrence(p, 4).counts
        for k in range(5):
            trees = list(iter_trees(p, k))
            assert len(trees) == counts[k]
            for tree in trees:
                path = tree_to_path(p, tree)
                assert validate_path(p, path).ok
                assert path_to_tree(p, path) == tree
            assert count_paths(p, k) == counts[k]


def test_count_paths_examples():
    assert count_paths(parse_partition("2,1"), 2) == 10
    assert count_paths(parse_partition("1"), 3) == 5
    assert count_paths(parse_partition("3,3,2"), 2) == 44
    assert count_paths(parse_partition("2,1"), 0) == 2


def test_count_paths_budget():
    with pytest.raises(BudgetError):
        count_paths(parse_partition("3,3,2"), 12, budget=10)


def test_excursion_count_equals_tree_edges():
    p = self_conjugate_from_heights((2, 1))
    for tree in iter_trees(p, 4):
        path = tree_to_path(p, tree)
        hs = path.heights()
        ups = sum(1 for h0, h1 in zip(hs, hs[1:]) if h1 > h0)
        assert ups == 4


def test_path_payload_roundtrip():
    path = DyckPath(FIG_PATH_STEPS)
    assert DyckPath.from_payload(path.to_payload()) == path
    bare = DyckPath([], label=3)
    assert DyckPath.from_payload(bare.to_payload()) == bare
