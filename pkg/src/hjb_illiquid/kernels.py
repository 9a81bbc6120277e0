"""Hot numerical kernels, JIT-compiled when numba is available.

Set the environment variable ``HJB_DISABLE_NUMBA=1`` before import to force
the pure-numpy/Python fallback (same functions, no compilation); results are
identical either way.  ``HJB_THREADS`` caps the numba thread pool.
"""

from __future__ import annotations

import math
import os

import numpy as np

NUMBA_ENABLED = os.environ.get("HJB_DISABLE_NUMBA", "") not in ("1", "true", "yes")

if NUMBA_ENABLED:
    try:
        import numba
        from numba import njit

        _threads = os.environ.get("HJB_THREADS")
        if _threads:
            numba.set_num_threads(max(1, min(int(_threads),
                                             numba.config.NUMBA_NUM_THREADS)))
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def reduced_h4_interior(W, z, h, dz, dh, r, a, mu, delta, eta, rho, sigma,
                        excess, omega):
    """Second-order central-difference residual of the reduced 2D PDE at the
    interior nodes of a uniform (z, h) grid.  Returns an
    (n_z - 2) x (n_h - 2) array."""
    n_z, n_h = W.shape
    out = np.empty((n_z - 2, n_h - 2))
    e1 = (1.0 / omega + 1.0 + math.log(a)) / a
    for i in range(1, n_z - 1):
        for j in range(1, n_h - 1):
            w_z = (W[i + 1, j] - W[i - 1, j]) / (2.0 * dz)
            w_zz = (W[i + 1, j] - 2.0 * W[i, j] + W[i - 1, j]) / (dz * dz)
            w_h = (W[i, j + 1] - W[i, j - 1]) / (2.0 * dh)
            w_hh = (W[i, j + 1] - 2.0 * W[i, j] + W[i, j - 1]) / (dh * dh)
            w_zh = (W[i + 1, j + 1] - W[i + 1, j - 1]
                    - W[i - 1, j + 1] + W[i - 1, j - 1]) / (4.0 * dz * dh)
            hh = h[j]
            num = excess * w_z + eta * rho * sigma * hh * w_zh
            out[i - 1, j - 1] = (0.5 * eta * eta * hh * hh * w_hh
                                 + (mu - delta) * hh * w_h
                                 + (r * z[i] + delta * hh) * w_z
                                 + w_z * math.log(w_z) / a
                                 - num * num / (2.0 * sigma * sigma * w_zz)
                                 - e1 * w_z
                                 - (r / omega) * W[i, j])
    return out


@njit(cache=True)
def euler_paths_block(normals, l0, h0, t_grid, weights, r, alpha, sigma, mu,
                      delta, eta, rho, a, policy_kind, policy_params,
                      pi_table, c0_table, z_grid, h_grid, zoff, r_a_omega,
                      c_extra):
    """Euler-Maruyama simulation of one block of paths; returns per-path
    (objective, clamp_count, ruin_flag).

    normals: (n_paths, n_steps, 2) standard normals (correlation applied here).
    weights: per-step survival weights F(t_{k+1}) - F(t_k) multiplying the
    consumption utility -e^{-a c}.
    policy_kind: 0 constant (pi0, c0) = policy_params[:2];
                 1 Merton-ratio pi with c = q * max(l, floor),
                   policy_params = (pi0, q, floor);
                 2 bilinear table on (z, h): pi = pi_table, c = c0_table
                   + r_a_omega * t + c_extra[k], z = l + zoff[k].
    """
    n_paths, n_steps, _ = normals.shape
    obj = np.zeros(n_paths)
    clamps = np.zeros(n_paths, dtype=np.int64)
    ruin = np.zeros(n_paths, dtype=np.int64)
    rho_c = math.sqrt(1.0 - rho * rho)
    n_zt = z_grid.shape[0]
    n_ht = h_grid.shape[0]
    for pth in range(n_paths):
        l = l0
        h = h0
        for k in range(n_steps):
            t = t_grid[k]
            dt = t_grid[k + 1] - t_grid[k]
            if policy_kind == 0:
                pi = policy_params[0]
                c = policy_params[1]
            elif policy_kind == 1:
                pi = policy_params[0]
                base = l if l > policy_params[2] else policy_params[2]
                c = policy_params[1] * base
            else:
                zq = l + zoff[k]
                if zq < z_grid[0]:
                    zq = z_grid[0]
                elif zq > z_grid[n_zt - 1]:
                    zq = z_grid[n_zt - 1]
                hq = h
                if hq < h_grid[0]:
                    hq = h_grid[0]
                elif hq > h_grid[n_ht - 1]:
                    hq = h_grid[n_ht - 1]
                iz = int((zq - z_grid[0]) / (z_grid[1] - z_grid[0]))
                if iz > n_zt - 2:
                    iz = n_zt - 2
                ih = int((hq - h_grid[0]) / (h_grid[1] - h_grid[0]))
                if ih > n_ht - 2:
                    ih = n_ht - 2
                fz = (zq - z_grid[iz]) / (z_grid[iz + 1] - z_grid[iz])
                fh = (hq - h_grid[ih]) / (h_grid[ih + 1] - h_grid[ih])
                pi = ((1 - fz) * (1 - fh) * pi_table[iz, ih]
                      + fz * (1 - fh) * pi_table[iz + 1, ih]
                      + (1 - fz) * fh * pi_table[iz, ih + 1]
                      + fz * fh * pi_table[iz + 1, ih + 1])
                c = ((1 - fz) * (1 - fh) * c0_table[iz, ih]
                     + fz * (1 - fh) * c0_table[iz + 1, ih]
                     + (1 - fz) * fh * c0_table[iz, ih + 1]
                     + fz * fh * c0_table[iz + 1, ih + 1]) \
                    + r_a_omega * t + c_extra[k]
            if c < 0.0:
                c = 0.0
                clamps[pth] += 1
            obj[pth] += weights[k] * (-math.exp(-a * c))
            dw1 = normals[pth, k, 0] * math.sqrt(dt)
            dw2 = (rho * normals[pth, k, 0]
                   + rho_c * normals[pth, k, 1]) * math.sqrt(dt)
            l = l + (r * l + delta * h + pi * (alpha - r) - c) * dt \
                + pi * sigma * dw1
            h = h + h * (mu - delta) * dt + h * eta * dw2
            if h <= 0.0:
                h = 1e-12
            if l < -1e6:
                ruin[pth] = 1
    return obj, clamps, ruin


@njit(cache=True)
def gbm_terminal_block(normals, h0, dt, mu, delta, eta, rho):
    """Terminal illiquid values H_T for a block, Euler scheme (weak-error
    sanity checks)."""
    n_paths, n_steps, _ = normals.shape
    out = np.empty(n_paths)
    rho_c = math.sqrt(1.0 - rho * rho)
    for pth in range(n_paths):
        h = h0
        for k in range(n_steps):
            dw2 = (rho * normals[pth, k, 0]
                   + rho_c * normals[pth, k, 1]) * math.sqrt(dt)
            h = h + h * (mu - delta) * dt + h * eta * dw2
        out[pth] = h
    return out
