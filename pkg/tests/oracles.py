"""Independent reference implementations (dense, O(N^2) or worse).

None of these import the package's numerical code paths; they rebuild the
documented constructions from scratch so the tests compare two codes.
"""
import numpy as np


def dft_speckle(n, dx, seed, v0, kind="speckle-gauss"):
    """Speckle realization via explicit DFT sums and the same seed stream."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2, n))
    w = (z[0] + 1j * z[1]) / np.sqrt(2)
    j = np.arange(n)
    jj = np.where(j < n // 2, j, j - n)  # FFT-ordered integer momenta
    k = 2 * np.pi * jj / (n * dx)
    if kind == "speckle-gauss":
        p = np.exp(-k**2)
    else:
        p = np.where(np.abs(np.abs(k) - 1) < 1e-9, 0.5, (np.abs(k) < 1).astype(float))
    fwd = np.exp(-2j * np.pi * np.outer(j, j) / n)
    spec = fwd @ w
    field = (np.conj(fwd) @ (np.sqrt(p) * spec)) / n
    return v0 * np.abs(field) ** 2 / p.mean()


def dense_hamiltonian(v, dx):
    n = len(v)
    h = np.zeros((n, n))
    for i in range(n):
        h[i, i] = 1 / dx**2 + v[i]
        h[i, (i + 1) % n] -= 0.5 / dx**2
        h[(i + 1) % n, i] -= 0.5 / dx**2
    return h


def gauss_elim(a, b):
    """Plain Gaussian elimination with partial pivoting."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    for c in range(n):
        p = c + np.argmax(np.abs(a[c:, c]))
        a[[c, p]], b[[c, p]] = a[[p, c]], b[[p, c]]
        for r in range(c + 1, n):
            f = a[r, c] / a[c, c]
            a[r, c:] -= f * a[c, c:]
            b[r] -= f * b[c]
    x = np.zeros(n)
    for r in range(n - 1, -1, -1):
        x[r] = (b[r] - a[r, r + 1:] @ x[r + 1:]) / a[r, r]
    return x


def wigner_quadrature(psi, dx):
    """Direct O(N^3) evaluation of the discrete Wigner sum (rows k, cols x).

    Half-step samples by explicit trigonometric interpolation with the
    Nyquist term kept on the -N/2 side.
    """
    n = len(psi)
    L = n * dx
    j = np.arange(-n // 2, n // 2)
    c = np.array([np.sum(psi * np.exp(-2j * np.pi * q * np.arange(n) / n)) for q in j]) / n

    def interp(y):
        return np.sum(c * np.exp(2j * np.pi * j * y / L))

    m = np.arange(-n // 2, n // 2)
    w = np.zeros((n, n))
    for a in range(n):
        x = a * dx
        corr = np.array([np.conj(interp(x - mm * dx / 2)) * interp(x + mm * dx / 2) for mm in m])
        for b, q in enumerate(j):
            k = 2 * np.pi * q / L
            w[b, a] = (dx / (2 * np.pi) * np.sum(np.exp(-1j * k * m * dx) * corr)).real
    return w


def pairwise_autocov(samples):
    """g(d) = <V(x)V(x+d)> - <V>^2 by direct pair loops (circular)."""
    v = np.asarray(samples, dtype=float)
    r, n = v.shape
    mean = v.mean()
    g = np.zeros(n // 2 + 1)
    for d in range(n // 2 + 1):
        g[d] = np.mean(v * np.roll(v, -d, axis=1)) - mean**2
    return g


def dense_cheb_moments(h, v, order):
    """<v|T_m(h)|v> via the dense three-term recurrence on matrices."""
    n = h.shape[0]
    t0, t1 = np.eye(n), h.copy()
    mu = [np.vdot(v, t0 @ v).real, np.vdot(v, t1 @ v).real]
    for _ in range(2, order):
        t0, t1 = t1, 2 * h @ t1 - t0
        mu.append(np.vdot(v, t1 @ v).real)
    return np.array(mu[:order])


def flood_components(mask):
    """4-connected components of a boolean [k, x] mask, periodic in x."""
    nk, nx = mask.shape
    label = -np.ones(mask.shape, dtype=int)
    count = 0
    for j0 in range(nk):
        for n0 in range(nx):
            if mask[j0, n0] and label[j0, n0] < 0:
                stack = [(j0, n0)]
                label[j0, n0] = count
                while stack:
                    j, n = stack.pop()
                    for dj, dn in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        jj, nn = j + dj, (n + dn) % nx
                        if 0 <= jj < nk and mask[jj, nn] and label[jj, nn] < 0:
                            label[jj, nn] = count
                            stack.append((jj, nn))
                count += 1
    return count
