"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``QKPR_DISABLE_NUMBA`` is
unset (or ``0``). ``use_backend`` switches at runtime, which the tests and
the benchmark use to compare both paths.

Kernels:
  kraus_sum        sum_k E_k rho E_k^dagger for a packed Kraus stack
  unitary          3x3 strategy unitary from the eight angles
  form_grid        quadratic-form payoff over a full tensor grid of angles
  pattern_search   Hooke-Jeeves maximisation of the quadratic-form payoff
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_ENV_FLAG = "QKPR_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


_backend = "numba" if numba is not None and not _env_disabled() else "numpy"


def backend() -> str:
    return _backend


def use_backend(name: str) -> str:
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    prev, _backend = _backend, name
    return prev


def _identity(f):
    return f


_njit = numba.njit(cache=True) if numba is not None else _identity


# ---------------------------------------------------------------------------
# Kraus sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PackedKraus:
    """A Kraus list kept both dense and as concatenated COO triplets."""

    dense: np.ndarray  # (n, d, d)
    ptr: np.ndarray  # (n + 1,) offsets into rows/cols/vals
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @classmethod
    def pack(cls, ops) -> "PackedKraus":
        dense = np.ascontiguousarray(np.asarray(ops, dtype=np.complex128))
        ptr = [0]
        rows, cols, vals = [], [], []
        for op in dense:
            r, c = np.nonzero(op)
            rows.append(r)
            cols.append(c)
            vals.append(op[r, c])
            ptr.append(ptr[-1] + len(r))
        return cls(
            dense=dense,
            ptr=np.asarray(ptr, dtype=np.int64),
            rows=np.concatenate(rows).astype(np.int64),
            cols=np.concatenate(cols).astype(np.int64),
            vals=np.concatenate(vals).astype(np.complex128),
        )


@_njit
def _kraus_sum_coo(ptr, rows, cols, vals, rho):
    d = rho.shape[0]
    out = np.zeros((d, d), dtype=np.complex128)
    tmp = np.zeros((d, d), dtype=np.complex128)
    seen = np.zeros(d, dtype=np.bool_)
    touched = np.empty(d, dtype=np.int64)
    for k in range(ptr.shape[0] - 1):
        lo, hi = ptr[k], ptr[k + 1]
        nt = 0
        for a in range(lo, hi):
            i = rows[a]
            if not seen[i]:
                seen[i] = True
                touched[nt] = i
                nt += 1
                tmp[i, :] = 0.0
        # tmp = E_k @ rho on the touched rows
        for a in range(lo, hi):
            i, j, v = rows[a], cols[a], vals[a]
            for l in range(d):
                tmp[i, l] += v * rho[j, l]
        # out += tmp @ E_k^dagger
        for b in range(lo, hi):
            m, l, cv = rows[b], cols[b], np.conj(vals[b])
            for t in range(nt):
                i = touched[t]
                out[i, m] += tmp[i, l] * cv
        for t in range(nt):
            seen[touched[t]] = False
    return out


def _kraus_sum_dense(dense, rho):
    return np.matmul(np.matmul(dense, rho), dense.conj().transpose(0, 2, 1)).sum(axis=0)


def kraus_sum(packed: PackedKraus, rho: np.ndarray) -> np.ndarray:
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    if _backend == "numba":
        return _kraus_sum_coo(packed.ptr, packed.rows, packed.cols, packed.vals, rho)
    return _kraus_sum_dense(packed.dense, rho)


# ---------------------------------------------------------------------------
# Strategy unitaries
# ---------------------------------------------------------------------------


def _np_unitaries(x: np.ndarray) -> np.ndarray:
    """Batched strategy unitaries, x of shape (n, 8) -> (n, 3, 3)."""
    th, ph, chi, a1, a2, a3, b1, b2 = np.moveaxis(np.asarray(x, dtype=np.float64), -1, 0)
    st, ct = np.sin(th), np.cos(th)
    sp, cp = np.sin(ph), np.cos(ph)
    sc, cc = np.sin(chi), np.cos(chi)
    z = np.stack(
        [st * cp * np.exp(1j * a1), st * sp * np.exp(1j * a2), ct * np.exp(1j * a3)], axis=-1
    )
    w = np.stack(
        [
            cc * ct * cp * np.exp(1j * (b1 - a1)) + sc * sp * np.exp(1j * (b2 - a1)),
            cc * ct * sp * np.exp(1j * (b1 - a2)) - sc * cp * np.exp(1j * (b2 - a2)),
            -cc * st * np.exp(1j * (b1 - a3)),
        ],
        axis=-1,
    )
    zb = z.conj()
    third = np.stack(
        [
            zb[..., 1] * w[..., 2] - zb[..., 2] * w[..., 1],
            zb[..., 2] * w[..., 0] - zb[..., 0] * w[..., 2],
            zb[..., 0] * w[..., 1] - zb[..., 1] * w[..., 0],
        ],
        axis=-1,
    )
    return np.stack([z, w.conj(), third], axis=-1)


@_njit
def _nb_unitary(x):
    th, ph, chi = x[0], x[1], x[2]
    a1, a2, a3, b1, b2 = x[3], x[4], x[5], x[6], x[7]
    st, ct = math.sin(th), math.cos(th)
    sp, cp = math.sin(ph), math.cos(ph)
    sc, cc = math.sin(chi), math.cos(chi)
    z1 = st * cp * complex(math.cos(a1), math.sin(a1))
    z2 = st * sp * complex(math.cos(a2), math.sin(a2))
    z3 = ct * complex(math.cos(a3), math.sin(a3))
    w1 = cc * ct * cp * complex(math.cos(b1 - a1), math.sin(b1 - a1)) + sc * sp * complex(
        math.cos(b2 - a1), math.sin(b2 - a1)
    )
    w2 = cc * ct * sp * complex(math.cos(b1 - a2), math.sin(b1 - a2)) - sc * cp * complex(
        math.cos(b2 - a2), math.sin(b2 - a2)
    )
    w3 = -cc * st * complex(math.cos(b1 - a3), math.sin(b1 - a3))
    u = np.empty((3, 3), dtype=np.complex128)
    u[0, 0], u[1, 0], u[2, 0] = z1, z2, z3
    u[0, 1], u[1, 1], u[2, 1] = w1.conjugate(), w2.conjugate(), w3.conjugate()
    z1c, z2c, z3c = z1.conjugate(), z2.conjugate(), z3.conjugate()
    u[0, 2] = z2c * w3 - z3c * w2
    u[1, 2] = z3c * w1 - z1c * w3
    u[2, 2] = z1c * w2 - z2c * w1
    return u


def unitary(x) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if _backend == "numba":
        return _nb_unitary(x)
    return _np_unitaries(x[None, :])[0]


# ---------------------------------------------------------------------------
# Quadratic-form payoff: value(x) = Re( vec(U(x))^H  H  vec(U(x)) )
# ---------------------------------------------------------------------------


@_njit
def _nb_form_value(h, x):
    u = _nb_unitary(x).ravel()
    acc = 0.0
    for a in range(9):
        hu = 0.0j
        for b in range(9):
            hu += h[a, b] * u[b]
        acc += (u[a].conjugate() * hu).real
    return acc


def _np_form_value(h, x):
    u = _np_unitaries(x[None, :])[0].ravel()
    return float(np.vdot(u, h @ u).real)


def form_value(h: np.ndarray, x) -> float:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if _backend == "numba":
        return float(_nb_form_value(h, x))
    return _np_form_value(h, x)


@_njit
def _nb_form_grid(h, axes):
    ndim, m = axes.shape
    n = m**ndim
    out = np.empty(n, dtype=np.float64)
    x = np.empty(ndim, dtype=np.float64)
    for idx in range(n):
        r = idx
        for d in range(ndim - 1, -1, -1):
            x[d] = axes[d, r % m]
            r //= m
        out[idx] = _nb_form_value(h, x)
    return out


def _np_form_grid(h, axes, chunk=1 << 15):
    ndim, m = axes.shape
    n = m**ndim
    out = np.empty(n, dtype=np.float64)
    powers = m ** np.arange(ndim - 1, -1, -1)
    for start in range(0, n, chunk):
        idx = np.arange(start, min(start + chunk, n))
        digits = (idx[:, None] // powers[None, :]) % m
        pts = axes[np.arange(ndim)[None, :], digits]
        u = _np_unitaries(pts).reshape(len(idx), 9)
        out[start : start + len(idx)] = np.einsum("na,ab,nb->n", u.conj(), h, u).real
    return out


def form_grid(h: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """Form value at every point of the tensor grid ``axes`` (ndim x m),
    flattened in row-major order (last axis fastest)."""
    h = np.ascontiguousarray(h, dtype=np.complex128)
    axes = np.ascontiguousarray(axes, dtype=np.float64)
    if _backend == "numba":
        return _nb_form_grid(h, axes)
    return _np_form_grid(h, axes)


def grid_point(axes: np.ndarray, flat_index: int) -> np.ndarray:
    ndim, m = axes.shape
    x = np.empty(ndim)
    r = int(flat_index)
    for d in range(ndim - 1, -1, -1):
        x[d] = axes[d, r % m]
        r //= m
    return x


# ---------------------------------------------------------------------------
# Hooke-Jeeves pattern search (maximisation), compiled per backend
# ---------------------------------------------------------------------------


def _build_search(value_fn, wrap):
    def project(v, lo, hi, periodic):
        out = v.copy()
        for d in range(v.shape[0]):
            if periodic[d]:
                span = hi[d] - lo[d]
                out[d] = lo[d] + (v[d] - lo[d]) % span
            else:
                out[d] = min(max(v[d], lo[d]), hi[d])
        return out

    project = wrap(project)

    def explore(h, x, fx, step, lo, hi, periodic, budget, nev):
        y = x.copy()
        fy = fx
        for d in range(x.shape[0]):
            if nev >= budget:
                break
            for sign in (1.0, -1.0):
                trial = y.copy()
                trial[d] += sign * step[d]
                trial = project(trial, lo, hi, periodic)
                ft = value_fn(h, trial)
                nev += 1
                if ft > fy:
                    y, fy = trial, ft
                    break
                if nev >= budget:
                    break
        return y, fy, nev

    explore = wrap(explore)

    def search(h, x0, step0, lo, hi, periodic, min_step, budget):
        x = project(x0, lo, hi, periodic)
        fx = value_fn(h, x)
        nev = 1
        step = step0.copy()
        while nev < budget:
            y, fy, nev = explore(h, x, fx, step, lo, hi, periodic, budget, nev)
            if fy > fx:
                # pattern moves along the improving direction while they pay off
                while nev < budget:
                    base = project(y + (y - x), lo, hi, periodic)
                    x, fx = y, fy
                    fb = value_fn(h, base)
                    nev += 1
                    z, fz, nev = explore(h, base, fb, step, lo, hi, periodic, budget, nev)
                    if fz > fx:
                        y, fy = z, fz
                    else:
                        break
            else:
                if step.max() < min_step:
                    break
                step = step * 0.5
        return x, fx, nev, step.max()

    return wrap(search)


_np_search = _build_search(_np_form_value, _identity)
_nb_search = None


def pattern_search(h, x0, step0, lo, hi, periodic, min_step: float, budget: int):
    """Maximise the form value from ``x0``. Returns (x, value, evaluations, final_max_step).

    Every accepted move strictly improves the value, so the returned value
    is never below the value at ``x0`` (after projection into the box).
    """
    global _nb_search
    args = (
        np.ascontiguousarray(h, dtype=np.complex128),
        np.asarray(x0, dtype=np.float64).copy(),
        np.asarray(step0, dtype=np.float64).copy(),
        np.asarray(lo, dtype=np.float64),
        np.asarray(hi, dtype=np.float64),
        np.asarray(periodic, dtype=np.bool_),
        float(min_step),
        int(budget),
    )
    if _backend == "numba":
        if _nb_search is None:
            _nb_search = _build_search(_nb_form_value, numba.njit)
        x, fx, nev, last = _nb_search(*args)
    else:
        x, fx, nev, last = _np_search(*args)
    return np.asarray(x), float(fx), int(nev), float(last)
