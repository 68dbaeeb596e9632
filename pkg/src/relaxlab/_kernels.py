"""Hot numeric kernels for the discretized envelope search.

Two interchangeable backends compute the same quantities:

* ``numba``: scalar-loop kernels compiled with ``@njit`` (the default);
* ``numpy``: vectorized equivalents, used as a fallback and as an
  independent implementation for benchmarks and agreement tests.

Selection is via the environment variable ``RELAXLAB_BACKEND`` (``numba`` or
``numpy``), read at import.  When numba is not importable the numpy path is
used silently.  Results of the two backends agree to floating-point
reduction order; they are not guaranteed bit-identical, and reproducibility
is promised per backend, not across backends.

Kernel-level integrand encoding: ``kind 0`` is the finite well approximant
with parameter ``fa_n``; ``kind 1`` is a finite tabulation ``(tab_zs,
tab_vals)`` evaluated by linear interpolation, +inf outside the grid.
"""

from __future__ import annotations

import os

import numpy as np

KIND_FINITE_APPROX = 0
KIND_TABULATED = 1

_env = os.environ.get("RELAXLAB_BACKEND", "numba").strip().lower()
if _env not in ("numba", "numpy"):
    raise RuntimeError(f"RELAXLAB_BACKEND must be 'numba' or 'numpy', got {_env!r}")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

BACKEND = "numba" if (_env == "numba" and HAVE_NUMBA) else "numpy"


def backend() -> str:
    """Name of the active backend ('numba' or 'numpy')."""
    return BACKEND


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------


def _f_array(z, kind, fa_n, tab_zs, tab_vals):
    """Vectorized integrand evaluation for the kernel encoding."""
    z = np.asarray(z, dtype=float)
    if kind == KIND_FINITE_APPROX:
        return np.minimum(
            np.minimum(fa_n * (z - 1.0) ** 2, fa_n * (z + 1.0) ** 2),
            1.0 + fa_n * z * z,
        )
    out = np.interp(z, tab_zs, tab_vals, left=np.inf, right=np.inf)
    out = np.where((z < tab_zs[0]) | (z > tab_zs[-1]), np.inf, out)
    return out


def grid_energy_numpy(v, kind, fa_n, tab_zs, tab_vals) -> float:
    """Mean of f(v_i - v_j) over all ordered cell pairs, diagonal included."""
    diff = v[:, None] - v[None, :]
    return float(np.mean(_f_array(diff.ravel(), kind, fa_n, tab_zs, tab_vals)))


def local_search_numpy(
    v0,
    cells,
    props,
    kind,
    fa_n,
    tab_zs,
    tab_vals,
    win_targets,
    n_w,
    delta,
    penalty_w,
):
    """Greedy single-cell descent on energy plus window penalty.

    ``cells``/``props`` are the pre-drawn move stream: at step s the value of
    cell ``cells[s]`` is proposed to become ``props[s]`` and the move is kept
    iff it strictly decreases
    ``mean_f(v) + penalty_w * sum_k max(0, |win_avg_k - target_k| - delta)**2``.
    Returns the final cell values.
    """
    v = v0.copy()
    n = v.size
    n_windows = win_targets.size
    win_sums = v.reshape(n_windows, n_w).sum(axis=1)
    even = kind == KIND_FINITE_APPROX  # built-in approximant is even in z
    for c, b in zip(cells, props):
        a = v[c]
        if b == a:
            continue
        d_new = _f_array(b - v, kind, fa_n, tab_zs, tab_vals)
        d_old = _f_array(a - v, kind, fa_n, tab_zs, tab_vals)
        if even:
            delta_s = 2.0 * ((d_new.sum() - d_new[c]) - (d_old.sum() - d_old[c]))
        else:
            r_new = _f_array(v - b, kind, fa_n, tab_zs, tab_vals)
            r_old = _f_array(v - a, kind, fa_n, tab_zs, tab_vals)
            delta_s = (
                (d_new.sum() - d_new[c])
                - (d_old.sum() - d_old[c])
                + (r_new.sum() - r_new[c])
                - (r_old.sum() - r_old[c])
            )
        w = c // n_w
        old_excess = abs(win_sums[w] / n_w - win_targets[w]) - delta
        new_sum = win_sums[w] - a + b
        new_excess = abs(new_sum / n_w - win_targets[w]) - delta
        delta_pen = max(0.0, new_excess) ** 2 - max(0.0, old_excess) ** 2
        if delta_s / (n * n) + penalty_w * delta_pen < 0.0:
            v[c] = b
            win_sums[w] = new_sum
            s_tot += delta_s
    return v


# ---------------------------------------------------------------------------
# numba backend (same contracts, scalar loops)
# ---------------------------------------------------------------------------


def _f_scalar_py(z, kind, fa_n, tab_zs, tab_vals):
    if kind == KIND_FINITE_APPROX:
        return min(fa_n * (z - 1.0) ** 2, fa_n * (z + 1.0) ** 2, 1.0 + fa_n * z * z)
    if z < tab_zs[0] or z > tab_zs[-1]:
        return np.inf
    i = np.searchsorted(tab_zs, z)
    if i < tab_zs.size and tab_zs[i] == z:
        return tab_vals[i]
    s = (z - tab_zs[i - 1]) / (tab_zs[i] - tab_zs[i - 1])
    return tab_vals[i - 1] + s * (tab_vals[i] - tab_vals[i - 1])


def _grid_energy_py(v, kind, fa_n, tab_zs, tab_vals):
    n = v.size
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += _f_scalar_py(v[i] - v[j], kind, fa_n, tab_zs, tab_vals)
    return total / (n * n)


def _local_search_py(
    v0, cells, props, kind, fa_n, tab_zs, tab_vals, win_targets, n_w, delta, penalty_w
):
    v = v0.copy()
    n = v.size
    n_windows = win_targets.size
    win_sums = np.zeros(n_windows)
    for i in range(n):
        win_sums[i // n_w] += v[i]
    for s in range(cells.size):
        c = cells[s]
        b = props[s]
        a = v[c]
        if b == a:
            continue
        delta_s = 0.0
        for j in range(n):
            if j == c:
                continue
            delta_s += _f_scalar_py(b - v[j], kind, fa_n, tab_zs, tab_vals)
            delta_s -= _f_scalar_py(a - v[j], kind, fa_n, tab_zs, tab_vals)
            delta_s += _f_scalar_py(v[j] - b, kind, fa_n, tab_zs, tab_vals)
            delta_s -= _f_scalar_py(v[j] - a, kind, fa_n, tab_zs, tab_vals)
        w = c // n_w
        old_excess = abs(win_sums[w] / n_w - win_targets[w]) - delta
        new_sum = win_sums[w] - a + b
        new_excess = abs(new_sum / n_w - win_targets[w]) - delta
        old_pen = old_excess * old_excess if old_excess > 0.0 else 0.0
        new_pen = new_excess * new_excess if new_excess > 0.0 else 0.0
        if delta_s / (n * n) + penalty_w * (new_pen - old_pen) < 0.0:
            v[c] = b
            win_sums[w] = new_sum
    return v


if HAVE_NUMBA:
    _f_scalar_nb = njit(cache=True)(_f_scalar_py)

    @njit(cache=True)
    def grid_energy_numba(v, kind, fa_n, tab_zs, tab_vals):
        n = v.size
        total = 0.0
        for i in range(n):
            for j in range(n):
                total += _f_scalar_nb(v[i] - v[j], kind, fa_n, tab_zs, tab_vals)
        return total / (n * n)

    @njit(cache=True)
    def local_search_numba(
        v0, cells, props, kind, fa_n, tab_zs, tab_vals, win_targets, n_w, delta, penalty_w
    ):
        v = v0.copy()
        n = v.size
        n_windows = win_targets.size
        win_sums = np.zeros(n_windows)
        for i in range(n):
            win_sums[i // n_w] += v[i]
        for s in range(cells.size):
            c = cells[s]
            b = props[s]
            a = v[c]
            if b == a:
                continue
            delta_s = 0.0
            for j in range(n):
                if j == c:
                    continue
                delta_s += _f_scalar_nb(b - v[j], kind, fa_n, tab_zs, tab_vals)
                delta_s -= _f_scalar_nb(a - v[j], kind, fa_n, tab_zs, tab_vals)
                delta_s += _f_scalar_nb(v[j] - b, kind, fa_n, tab_zs, tab_vals)
                delta_s -= _f_scalar_nb(v[j] - a, kind, fa_n, tab_zs, tab_vals)
            w = c // n_w
            old_excess = abs(win_sums[w] / n_w - win_targets[w]) - delta
            new_sum = win_sums[w] - a + b
            new_excess = abs(new_sum / n_w - win_targets[w]) - delta
            old_pen = old_excess * old_excess if old_excess > 0.0 else 0.0
            new_pen = new_excess * new_excess if new_excess > 0.0 else 0.0
            if delta_s / (n * n) + penalty_w * (new_pen - old_pen) < 0.0:
                v[c] = b
                win_sums[w] = new_sum
        return v

else:  # pragma: no cover - exercised only without numba
    grid_energy_numba = None
    local_search_numba = None


def grid_energy(v, kind, fa_n, tab_zs, tab_vals) -> float:
    if BACKEND == "numba":
        return float(grid_energy_numba(v, kind, fa_n, tab_zs, tab_vals))
    return grid_energy_numpy(v, kind, fa_n, tab_zs, tab_vals)


def local_search(
    v0, cells, props, kind, fa_n, tab_zs, tab_vals, win_targets, n_w, delta, penalty_w
):
    if BACKEND == "numba":
        return local_search_numba(
            v0, cells, props, kind, fa_n, tab_zs, tab_vals, win_targets, n_w, delta, penalty_w
        )
    return local_search_numpy(
        v0, cells, props, kind, fa_n, tab_zs, tab_vals, win_targets, n_w, delta, penalty_w
    )
