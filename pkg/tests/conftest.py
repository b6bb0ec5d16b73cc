import itertools


def height_vectors(max_sum, min_sum=1):
    """All positive integer compositions with total in [min_sum, max_sum]."""
    out = []
    for total in range(min_sum, max_sum + 1):
        for r in range(1, total + 1):
            for cuts in itertools.combinations(range(1, total), r - 1):
                bounds = (0,) + cuts + (total,)
                out.append(tuple(bounds[i + 1] - bounds[i] for i in range(r)))
    return out


def partitions_in_box(max_len, max_part):
    """All partitions with at most max_len parts, each at most max_part."""
    def rec(prefix, longest):
        yield tuple(prefix)
        if len(prefix) == max_len:
            return
        for p in range(1, longest + 1):
            prefix.append(p)
            yield from rec(prefix, p)
            prefix.pop()

    for first in range(1, max_part + 1):
        yield from rec([first], first)


def transpose_parts(parts):
    """Brute-force conjugate: transpose the box set."""
    boxes = {(i, j) for i, row in enumerate(parts) for j in range(row)}
    flipped = {(j, i) for (i, j) in boxes}
    rows = max(j for j, _ in flipped) + 1
    return tuple(sum(1 for (a, _) in flipped if a == i) for i in range(rows))
