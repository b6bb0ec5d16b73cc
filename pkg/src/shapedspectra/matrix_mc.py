"""Seeded Monte Carlo sampling of shaped random matrices.

A shaped matrix has i.i.d. unit-variance complex entries on the boxes of
the dilated diagram and zeros elsewhere; the object of interest is the
spectrum of its scaled Gram matrix.  Everything is deterministic given
the master seed: trial t draws from the counter-based Philox stream
keyed by ``SeedSequence(entropy=seed, spawn_key=(t,))``, so results do
not depend on the number of worker threads.
"""

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .partitions import Partition, dilate
from .partitions import null_space_dim as _null_space_dim

DIMENSION_CAP = 2000
RANK_TOL_FACTOR = 1e-8

ENTRY_LAWS = ("gaussian", "phase")


class DimensionCapError(RuntimeError):
    """Requested matrix dimension exceeds the configured cap."""


class RankToleranceWarning(UserWarning):
    """The zero/nonzero eigenvalue split is ambiguous at the rank tolerance."""


def _rng_for_trial(seed, trial):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(ss))


def _draw_entries(rng, shape, law):
    if law == "gaussian":
        # real and imaginary parts with variance 1/2 each: E|X|^2 = 1
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) \
            / np.sqrt(2.0)
    if law == "phase":
        return np.exp(2j * np.pi * rng.random(shape))
    raise ValueError(f"unknown entry law {law!r}; expected one of {ENTRY_LAWS}")


@dataclass(frozen=True)
class ShapedMatrix:
    """One sampled matrix: entries vanish off the dilated diagram."""

    partition: Partition
    dilation: int
    seed: int
    law: str
    entries: np.ndarray

    @property
    def dimension(self):
        return self.entries.shape[0]


def sample_matrix(p, n_dilation, seed, law="gaussian", cap=DIMENSION_CAP):
    """Draw the shaped matrix of the diagram dilated by ``n_dilation``.

    Deterministic: identical arguments give bit-identical entries.
    """
    dim = n_dilation * p.length
    if dim > cap:
        raise DimensionCapError(
            f"dimension {dim} exceeds the cap {cap}")
    dilated = dilate(p, n_dilation)
    rng = _rng_for_trial(seed, 0)
    x = _draw_entries(rng, (dim, dim), law)
    for i, row_len in enumerate(dilated.parts):
        x[i, row_len:] = 0.0
    return ShapedMatrix(p, n_dilation, seed, law, x)


def hermitian_eigenvalues(w):
    """Sorted real eigenvalues of a Hermitian matrix, with trace checks.

    The eigenvalue sum must reproduce the trace, and the sum of squares
    the squared Frobenius norm, both to 1e-10 relative.
    """
    eigs = np.linalg.eigvalsh(w)
    tr = float(np.trace(w).real)
    if abs(eigs.sum() - tr) > 1e-10 * (1.0 + abs(tr)):
        raise RuntimeError("eigenvalue sum fails the trace identity")
    fro2 = float(np.sum(np.abs(w) ** 2))
    if abs(np.sum(eigs ** 2) - fro2) > 1e-10 * (1.0 + fro2):
        raise RuntimeError("eigenvalue squares fail the Frobenius identity")
    return np.sort(eigs)


def gram_eigenvalues(x):
    """Eigenvalues of the scaled Gram matrix entries @ entries* / dilation."""
    if isinstance(x, ShapedMatrix):
        w = x.entries @ x.entries.conj().T / x.dilation
    else:
        raise TypeError("gram_eigenvalues expects a ShapedMatrix")
    return hermitian_eigenvalues(w)


@dataclass(frozen=True)
class SpectralSample:
    """Aggregated eigenvalue statistics of one experiment."""

    dim: int
    trials: int
    eigenvalues: np.ndarray       # all trials, sorted ascending
    hist_edges: np.ndarray
    hist_masses: np.ndarray
    moment_means: tuple           # m_1 .. m_kmax, averaged over trials
    moment_stderrs: tuple
    kernel_count: int             # eigenvalues under the rank tolerance

    @property
    def near_zero_fraction(self):
        return self.kernel_count / (self.dim * self.trials)


def _num_threads():
    raw = os.environ.get("LS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_trials(trial_fn, trials):
    threads = _num_threads()
    indices = range(trials)
    if threads == 1:
        return [trial_fn(t) for t in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(trial_fn, indices))


def _aggregate(per_trial_eigs, dim, trials, kmax, bins, hist_hi):
    eigs = np.sort(np.concatenate(per_trial_eigs))
    lam_max = float(eigs[-1])
    if eigs[0] < -1e-10 * max(lam_max, 1.0):
        raise RuntimeError("Gram spectrum dipped below the PSD tolerance")
    moments = np.empty((trials, kmax))
    kernel = 0
    for t, e in enumerate(per_trial_eigs):
        for k in range(1, kmax + 1):
            moments[t, k - 1] = np.mean(e ** k)
        kernel += int(np.sum(e < RANK_TOL_FACTOR * max(e[-1], 1e-300)))
    means = tuple(float(m) for m in moments.mean(axis=0))
    if trials > 1:
        stderrs = tuple(float(s) for s in
                        moments.std(axis=0, ddof=1) / np.sqrt(trials))
    else:
        stderrs = (0.0,) * kmax
    hi = max(hist_hi if hist_hi is not None else lam_max, lam_max)
    hi = hi * (1.0 + 1e-12) if hi > 0 else 1.0
    counts, edges = np.histogram(eigs, bins=bins, range=(0.0, hi))
    masses = counts / eigs.size
    return SpectralSample(dim, trials, eigs, edges, masses, means, stderrs,
                          kernel)


def _default_hist_hi(p):
    # analytic fat-hook support when there is one; None means the data max
    if p.blocks == 2 and p.is_self_conjugate():
        from .spectral_analytic import fat_hook_support
        return 1.1 * fat_hook_support(p.heights[0], p.heights[1]).z_plus
    return None


def run_experiment(p, n_dilation, trials, seed, bins=200, kmax=4,
                   law="gaussian", hist_hi=None, cap=DIMENSION_CAP):
    """Sample ``trials`` shaped matrices and aggregate their spectra.

    Per-trial seeds derive from the master seed by the spawn-key scheme
    in the module docstring.  Moments are averaged across trials with
    their standard errors; the histogram covers [0, hist_hi], which
    defaults to 1.1x the analytic support for two-block shapes and to
    the largest observed eigenvalue otherwise.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    dim = n_dilation * p.length
    if dim > cap:
        raise DimensionCapError(f"dimension {dim} exceeds the cap {cap}")
    dilated = dilate(p, n_dilation)
    row_lens = np.array(dilated.parts)
    if hist_hi is None:
        hist_hi = _default_hist_hi(p)

    def one_trial(t):
        rng = _rng_for_trial(seed, t)
        x = _draw_entries(rng, (dim, dim), law)
        for i, row_len in enumerate(row_lens):
            x[i, row_len:] = 0.0
        w = x @ x.conj().T / n_dilation
        return hermitian_eigenvalues(w)

    per_trial = _run_trials(one_trial, trials)
    return _aggregate(per_trial, dim, trials, kmax, bins, hist_hi)


def kernel_dim_check(p, n_dilation, seed, law="gaussian"):
    """Numeric kernel dimension of one sampled Gram matrix.

    Counts eigenvalues below 1e-8 times the largest one and verifies
    the count against the almost-sure formula for the dilated diagram.
    Warns when the zero/nonzero split is ambiguous (spectral gap under
    ten times the tolerance).
    """
    if law != "gaussian":
        raise ValueError("the kernel count needs a continuous entry law")
    x = sample_matrix(p, n_dilation, seed, law)
    eigs = gram_eigenvalues(x)
    tol = RANK_TOL_FACTOR * max(float(eigs[-1]), 1e-300)
    zero_mask = eigs < tol
    num_zero = int(np.sum(zero_mask))
    if 0 < num_zero < eigs.size:
        gap = float(eigs[num_zero] - eigs[num_zero - 1])
        if gap < 10 * tol:
            warnings.warn(
                f"zero/nonzero eigenvalue gap {gap} under 10x tolerance {tol}",
                RankToleranceWarning)
    expected = _null_space_dim(dilate(p, n_dilation))
    if num_zero != expected:
        raise RuntimeError(
            f"numeric kernel dimension {num_zero} does not match the "
            f"almost-sure value {expected}")
    return num_zero


def freeness_model(a1, a2, n_dilation, trials, seed, bins=200, kmax=4,
                   d_pattern=None, cap=DIMENSION_CAP):
    """Sample the asymptotically free comparison model for a two-block
    shape: two independent tall Gaussian blocks, the second masked by a
    periodic 0/1 projection:

        (A A* + (D B)(D B)*) / dilation

    with A, B of size (dilation*length) x (dilation*a1) and D the
    diagonal 0/1 matrix with pattern (0 x a1, 1 x a2) repeated.  Its
    spectrum converges to the same limit as the shaped-matrix
    experiment with heights (a1, a2).

    ``d_pattern`` overrides the projection diagonal (length a1+a2,
    tiled), which degenerates the model to a sum of two full Gram
    matrices when all ones.
    """
    a1, a2 = int(a1), int(a2)
    if a1 < 1 or a2 < 1:
        raise ValueError("heights must be positive")
    if trials < 1:
        raise ValueError("need at least one trial")
    ell = a1 + a2
    dim = n_dilation * ell
    if dim > cap:
        raise DimensionCapError(f"dimension {dim} exceeds the cap {cap}")
    if d_pattern is None:
        d_pattern = [0] * a1 + [1] * a2
    if len(d_pattern) != ell:
        raise ValueError(f"projection pattern must have length {ell}")
    diag = np.tile(np.asarray(d_pattern, dtype=float), n_dilation)
    inner = n_dilation * a1
    from .spectral_analytic import fat_hook_support
    hist_hi = 1.1 * fat_hook_support(a1, a2).z_plus

    def one_trial(t):
        rng = _rng_for_trial(seed, t)
        a_block = _draw_entries(rng, (dim, inner), "gaussian")
        b_block = _draw_entries(rng, (dim, inner), "gaussian")
        db = diag[:, None] * b_block
        w = (a_block @ a_block.conj().T + db @ db.conj().T) / n_dilation
        return hermitian_eigenvalues(w)

    per_trial = _run_trials(one_trial, trials)
    return _aggregate(per_trial, dim, trials, kmax, bins, hist_hi)
