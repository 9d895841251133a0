"""Compiled kernels for the periodic three-point Hamiltonian.

The matrix has diagonal a[n] and a constant hopping `beta` between n and
n+1 (mod N), including the corner pair (0, N-1).  Eigenvalue counts use the
inertia of H - E: the open chain 0..N-2 is factored LDL^T (Sturm pivots) and
site N-1 enters through its Schur complement.
"""
import numpy as np
from numba import njit

PIVMIN = 1e-280


@njit(cache=True)
def count_below_many(a, beta, shifts):
    """Number of eigenvalues strictly below each shift."""
    n = a.shape[0]
    m = shifts.shape[0]
    b2 = beta * beta
    r = np.empty(m)  # 1/pivot
    z = np.empty(m)
    acc = np.empty(m)
    cnt = np.zeros(m, dtype=np.int64)
    for k in range(m):
        dk = a[0] - shifts[k]
        if abs(dk) < PIVMIN:
            dk = -PIVMIN
        cnt[k] = 1 if dk < 0 else 0
        r[k] = 1.0 / dk
        z[k] = beta
        acc[k] = beta * beta * r[k]
    for i in range(1, n - 1):
        ai = a[i]
        extra = beta if i == n - 2 else 0.0
        for k in range(m):
            zi = -beta * z[k] * r[k] + extra
            dk = (ai - shifts[k]) - b2 * r[k]
            if abs(dk) < PIVMIN:
                dk = -PIVMIN
            cnt[k] += dk < 0
            rk = 1.0 / dk
            r[k] = rk
            z[k] = zi
            acc[k] += zi * zi * rk
    for k in range(m):
        if (a[n - 1] - shifts[k]) - acc[k] < 0:
            cnt[k] += 1
    return cnt


@njit(cache=True)
def bisect_eigenvalues(a, beta, lo, hi, first, count, tol):
    """Eigenvalues with global indices first..first+count-1, all inside [lo, hi]."""
    low = np.full(count, float(lo))
    up = np.full(count, float(hi))
    idx = np.arange(first, first + count)
    # shared coarse grid: one pass of 2*count shifts brackets every eigenvalue
    m = 2 * count
    pts = float(lo) + (float(hi) - float(lo)) * np.arange(m + 1) / m
    pts[m] = hi
    c = count_below_many(a, beta, pts)
    for j in range(count):
        g = np.searchsorted(c, idx[j], side="right")
        if 0 < g <= m:
            low[j] = pts[g - 1]
            up[j] = pts[g]
    active = np.arange(count)
    while active.shape[0] > 0:
        mids = 0.5 * (low[active] + up[active])
        c = count_below_many(a, beta, mids)
        keep = 0
        for t in range(active.shape[0]):
            j = active[t]
            if c[t] > idx[j]:
                up[j] = mids[t]
            else:
                low[j] = mids[t]
            if up[j] - low[j] > tol * (1.0 + abs(low[j])):
                active[keep] = j
                keep += 1
        active = active[:keep]
    return 0.5 * (low + up)


@njit(cache=True)
def cyclic_factor(diag, beta):
    """Factor the periodic tridiagonal matrix with diagonal `diag`.

    Returns reciprocal pivots of the open chain, T^{-1} c for the corner
    coupling c = beta*(e_0 + e_{N-2}), and the Schur complement of site N-1.
    """
    n = diag.shape[0]
    m = n - 1
    dinv = np.empty(m)
    q = np.empty(m)
    d = diag[0]
    if abs(d) < PIVMIN:
        d = PIVMIN
    dinv[0] = 1.0 / d
    q[0] = beta
    for i in range(1, m):
        l = beta * dinv[i - 1]
        d = diag[i] - l * beta
        if abs(d) < PIVMIN:
            d = PIVMIN
        dinv[i] = 1.0 / d
        q[i] = (beta if i == m - 1 else 0.0) - l * q[i - 1]
    q[m - 1] *= dinv[m - 1]
    for i in range(m - 2, -1, -1):
        q[i] = (q[i] - beta * q[i + 1]) * dinv[i]
    s = diag[n - 1] - beta * (q[0] + q[m - 1])
    if abs(s) < PIVMIN:
        s = PIVMIN
    return dinv, q, s


@njit(cache=True)
def cyclic_apply_inverse(dinv, q, s, beta, rhs, x):
    """x = A^{-1} rhs using the output of cyclic_factor."""
    n = rhs.shape[0]
    m = n - 1
    x[0] = rhs[0]
    for i in range(1, m):
        x[i] = rhs[i] - beta * dinv[i - 1] * x[i - 1]
    x[m - 1] *= dinv[m - 1]
    for i in range(m - 2, -1, -1):
        x[i] = (x[i] - beta * x[i + 1]) * dinv[i]
    last = (rhs[n - 1] - beta * (x[0] + x[m - 1])) / s
    for i in range(m):
        x[i] -= q[i] * last
    x[n - 1] = last


@njit(cache=True)
def cyclic_solve(diag, beta, rhs):
    """Solve the periodic tridiagonal system (no pivoting, tiny pivots clamped)."""
    dinv, q, s = cyclic_factor(diag, beta)
    x = np.empty(rhs.shape[0])
    cyclic_apply_inverse(dinv, q, s, beta, rhs, x)
    return x


@njit(cache=True)
def apply_h(a, beta, v):
    n = a.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = a[i] * v[i] + beta * (v[i - 1] + v[(i + 1) % n])
    return out


@njit(cache=True)
def inverse_iteration(a, beta, lams, gaptol, iters):
    """Unit-norm eigenvectors for sorted eigenvalue estimates `lams`.

    Near-degenerate neighbours (gap < gaptol*(1+|lam|)) are treated as a
    cluster and Gram-Schmidt orthogonalised against each other.
    Returns (refined eigenvalues, vectors as rows, residual norms).
    """
    n = a.shape[0]
    k = lams.shape[0]
    vecs = np.empty((k, n))
    out = np.empty(k)
    res = np.empty(k)
    scale = 0.0
    for i in range(n):
        scale = max(scale, abs(a[i]) + 2 * abs(beta))
    start = 0
    x = np.empty(n)
    y = np.empty(n)
    seed_vec = np.empty(n)
    for i in range(n):
        seed_vec[i] = np.sin(0.7 * i + 0.1) + 0.5
    for j in range(k):
        if j > 0 and lams[j] - lams[j - 1] > gaptol * (1.0 + abs(lams[j])):
            start = j
        mu = lams[j] + (1 + j - start) * 1e-14 * scale
        dinv, q, s = cyclic_factor(a - mu, beta)
        for i in range(n):
            x[i] = seed_vec[i] * (1.0 + 0.1 * ((i * (j + 3)) % 7))
        for _ in range(iters):
            cyclic_apply_inverse(dinv, q, s, beta, x, y)
            x, y = y, x
            for c in range(start, j):
                x -= np.dot(vecs[c], x) * vecs[c]
            x /= np.sqrt(np.dot(x, x))
        hx = apply_h(a, beta, x)
        lam = np.dot(x, hx)
        out[j] = lam
        res[j] = np.sqrt(np.sum((hx - lam * x) ** 2))
        vecs[j] = x
    return out, vecs, res
