"""Limiting spectral theory of Young-diagram-shaped random matrices.

Exact enumeration of the moment sequences, the tree/path bijection behind
them, algebraic Cauchy-transform equations, closed-form fat-hook spectra,
and seeded Monte Carlo experiments that confront all of the above.
"""

from .partitions import (
    Partition,
    BlockMap,
    PartitionError,
    parse_partition,
    conjugate,
    self_conjugate_from_heights,
    contains_cell,
    dilate,
    is_minimal,
    null_space_dim,
)

__version__ = "0.1.0"
