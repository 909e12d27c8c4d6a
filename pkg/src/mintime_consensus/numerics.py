"""Small algebraic toolbox: low-degree real root isolation, Sylvester-resultant
elimination for bivariate systems, and deterministic 1-D maximization.

Everything here is deterministic: subdivision at derivative critical points,
bracketed root refinement, fixed scan grids.  No randomness, so repeated runs
produce identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial, coefficients in ascending degree order."""

    coeffs: tuple

    @classmethod
    def of(cls, coeffs) -> "Poly":
        return cls(tuple(float(c) for c in np.atleast_1d(np.asarray(coeffs, dtype=float))))

    def trimmed(self, rel_tol: float = 1e-13) -> "Poly":
        c = np.asarray(self.coeffs)
        scale = np.abs(c).max() if len(c) else 0.0
        if scale == 0.0:
            return Poly((0.0,))
        keep = len(c)
        while keep > 1 and abs(c[keep - 1]) <= rel_tol * scale:
            keep -= 1
        return Poly(tuple(c[:keep]))

    @property
    def degree(self) -> int:
        return len(self.trimmed().coeffs) - 1

    def __call__(self, x):
        return npoly.polyval(x, np.asarray(self.coeffs))

    def deriv(self) -> "Poly":
        return Poly(tuple(npoly.polyder(np.asarray(self.coeffs))))

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(tuple(npoly.polyadd(np.asarray(self.coeffs), np.asarray(other.coeffs))))

    def __sub__(self, other: "Poly") -> "Poly":
        return Poly(tuple(npoly.polysub(np.asarray(self.coeffs), np.asarray(other.coeffs))))

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly(tuple(npoly.polymul(np.asarray(self.coeffs), np.asarray(other.coeffs))))
        return Poly(tuple(np.asarray(self.coeffs) * float(other)))

    __rmul__ = __mul__

    def is_zero(self, rel_tol: float = 0.0) -> bool:
        c = np.abs(np.asarray(self.coeffs))
        return bool(np.all(c <= rel_tol)) if rel_tol else bool(np.all(c == 0.0))


@dataclass(frozen=True)
class BiPoly:
    """Bivariate polynomial sum c[i, j] * w^i * q^j over a small coefficient matrix.

    `w` names the first (eliminable) variable and `q` the kept one, but the
    class itself is symmetric via :meth:`swapped`.
    """

    c: tuple  # tuple of row-tuples

    @classmethod
    def of(cls, mat) -> "BiPoly":
        if isinstance(mat, np.ndarray):
            m = np.atleast_2d(np.asarray(mat, dtype=float))
        else:
            rows = [np.atleast_1d(np.asarray(r, dtype=float)) for r in mat]
            width = max(len(r) for r in rows)
            m = np.zeros((len(rows), width))
            for i, r in enumerate(rows):
                m[i, : len(r)] = r
        return cls(tuple(tuple(float(v) for v in row) for row in m))

    @property
    def mat(self) -> np.ndarray:
        return np.asarray(self.c, dtype=float)

    def __call__(self, w, q):
        return npoly.polyval2d(w, q, self.mat)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        a, b = self.mat, other.mat
        n = max(a.shape[0], b.shape[0])
        m = max(a.shape[1], b.shape[1])
        out = np.zeros((n, m))
        out[: a.shape[0], : a.shape[1]] += a
        out[: b.shape[0], : b.shape[1]] += b
        return BiPoly.of(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + BiPoly.of(-other.mat)

    def scale(self, k: float) -> "BiPoly":
        return BiPoly.of(self.mat * k)

    def shift_w(self, power: int) -> "BiPoly":
        """Multiply by w^power."""
        m = self.mat
        out = np.zeros((m.shape[0] + power, m.shape[1]))
        out[power:, :] = m
        return BiPoly.of(out)

    def mul_wpoly(self, poly: "Poly") -> "BiPoly":
        """Multiply by a polynomial in w."""
        m = self.mat
        coeffs = np.asarray(poly.coeffs)
        out = np.zeros((m.shape[0] + len(coeffs) - 1, m.shape[1]))
        for k, ck in enumerate(coeffs):
            if ck != 0.0:
                out[k:k + m.shape[0], :] += ck * m
        return BiPoly.of(out)

    def deriv_w(self) -> "BiPoly":
        m = self.mat
        if m.shape[0] == 1:
            return BiPoly.of(np.zeros((1, m.shape[1])))
        rows = m[1:, :] * np.arange(1, m.shape[0])[:, None]
        return BiPoly.of(rows)

    def deriv_q(self) -> "BiPoly":
        m = self.mat
        if m.shape[1] == 1:
            return BiPoly.of(np.zeros((m.shape[0], 1)))
        cols = m[:, 1:] * np.arange(1, m.shape[1])[None, :]
        return BiPoly.of(cols)

    def coeffs_in_w(self, rel_tol: float = 1e-13):
        """Coefficient list [Poly in q] for powers w^0, w^1, ..., trimmed at the top."""
        m = self.mat
        scale = np.abs(m).max()
        rows = [Poly.of(m[i, :]) for i in range(m.shape[0])]
        while len(rows) > 1 and np.abs(np.asarray(rows[-1].coeffs)).max() <= rel_tol * max(scale, 1e-300):
            rows.pop()
        return rows

    def strip_w_factor(self, rel_tol: float = 1e-12):
        """Divide out the largest power of w that factors the polynomial exactly."""
        m = self.mat
        scale = max(np.abs(m).max(), 1e-300)
        k = 0
        while k < m.shape[0] - 1 and np.abs(m[k, :]).max() <= rel_tol * scale:
            k += 1
        return BiPoly.of(m[k:, :]), k


def real_roots(p, lo: float, hi: float, tol: float = 1e-10) -> list:
    """All real roots of p in the closed interval [lo, hi], multiplicity collapsed.

    Deterministic: the interval is subdivided at the (recursively computed)
    critical points of p, sign changes are bracketed and refined.  Tangential
    (even-multiplicity) roots are accepted at critical points where |p| falls
    below a sqrt(machine-eps)-scaled threshold: coefficient rounding shifts a
    double root off the real axis by O(sqrt(eps)), so a tighter test would
    silently drop them.
    """
    if hi <= lo:
        raise ValueError(f"need hi > lo, got [{lo}, {hi}]")
    poly = (p if isinstance(p, Poly) else Poly.of(p)).trimmed()
    c = np.asarray(poly.coeffs)
    if np.abs(c).max() == 0.0:
        raise ValueError("identically-zero polynomial has no isolated roots")
    # scale-normalize for stable certification
    poly = Poly.of(c / np.abs(c).max())
    deg = poly.degree
    if deg == 0:
        return []
    scale = 1.0 + float(np.abs(np.asarray(poly.coeffs)).sum())
    cert = tol * scale
    tangent_cert = max(cert, 3e-8 * scale)

    if deg == 1:
        a0, a1 = poly.coeffs[0], poly.coeffs[1]
        r = -a0 / a1
        return [r] if lo - tol <= r <= hi + tol else []

    crit = real_roots(poly.deriv(), lo, hi, tol) if deg >= 2 else []
    nodes = sorted({lo, hi, *[t for t in crit if lo < t < hi]})
    roots = []
    vals = [float(poly(t)) for t in nodes]
    for t, v in zip(nodes, vals):
        if abs(v) <= tangent_cert:
            roots.append(t)
    for (a, fa), (b, fb) in zip(zip(nodes, vals), zip(nodes[1:], vals[1:])):
        if abs(fa) <= cert or abs(fb) <= cert:
            continue
        if fa * fb < 0:
            r = brentq(poly, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
            roots.append(float(r))
    # Newton polish
    dp = poly.deriv()
    polished = []
    for r in roots:
        for _ in range(3):
            d = float(dp(r))
            if d == 0.0:
                break
            step = float(poly(r)) / d
            if not np.isfinite(step) or abs(step) > (hi - lo):
                break
            r = min(max(r - step, lo), hi)
        polished.append(r)
    polished.sort()
    out = []
    for r in polished:
        if not out or abs(r - out[-1]) > max(tol, 1e-12) * (1.0 + abs(r)):
            out.append(r)
    return [r for r in out if lo - tol <= r <= hi + tol]


def _poly_det(matrix) -> Poly:
    """Determinant of a small square matrix of Poly entries by minor expansion."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = Poly((0.0,))
    for j in range(n):
        piv = matrix[0][j]
        if np.abs(np.asarray(piv.coeffs)).max() == 0.0:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in matrix[1:]]
        term = piv * _poly_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def resultant_eliminate(f: BiPoly, g: BiPoly, eliminate: str = "w") -> Poly:
    """Sylvester resultant of f and g with respect to the eliminated variable.

    Every common root of (f, g) projects onto a root of the result; spurious
    roots are possible and must be filtered by the caller.
    """
    if eliminate not in ("w", "q"):
        raise ValueError("eliminate must be 'w' or 'q'")
    if eliminate == "q":
        f = BiPoly.of(f.mat.T)
        g = BiPoly.of(g.mat.T)
    fc = f.coeffs_in_w()
    gc = g.coeffs_in_w()
    m = len(fc) - 1
    n = len(gc) - 1
    if m == 0 and n == 0:
        raise ValueError("both polynomials are degree 0 in the eliminated variable")
    if m == 0:
        return fc[0].trimmed()
    if n == 0:
        return gc[0].trimmed()
    size = m + n
    zero = Poly((0.0,))
    rows = []
    frow = list(reversed(fc))  # descending
    grow = list(reversed(gc))
    for i in range(n):
        rows.append([zero] * i + frow + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + grow + [zero] * (size - n - 1 - i))
    return _poly_det(rows).trimmed()


def maximize_1d(f, lo: float, hi: float, tol: float = 1e-10, samples: int = 512):
    """Deterministic scalar maximization: dense grid scan plus golden-section refine.

    Returns (argmax, max).  Non-finite values of f mark infeasible points; if
    the whole interval is infeasible, returns (nan, -inf).
    """
    if hi <= lo:
        raise ValueError(f"empty or inverted interval [{lo}, {hi}]")
    xs = np.linspace(lo, hi, samples)
    vals = np.array([f(x) for x in xs], dtype=float)
    vals[~np.isfinite(vals)] = -np.inf
    k = int(np.argmax(vals))
    if not np.isfinite(vals[k]):
        return float("nan"), float("-inf")
    a = xs[max(k - 1, 0)]
    b = xs[min(k + 1, samples - 1)]
    # golden-section on [a, b]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc_, fd_ = f(c), f(d)
    fc_ = fc_ if np.isfinite(fc_) else -np.inf
    fd_ = fd_ if np.isfinite(fd_) else -np.inf
    while b - a > tol:
        if fc_ >= fd_:
            b, d, fd_ = d, c, fc_
            c = b - _GOLDEN * (b - a)
            fc_ = f(c)
            fc_ = fc_ if np.isfinite(fc_) else -np.inf
        else:
            a, c, fc_ = c, d, fd_
            d = a + _GOLDEN * (b - a)
            fd_ = f(d)
            fd_ = fd_ if np.isfinite(fd_) else -np.inf
    xstar = 0.5 * (a + b)
    cands = [(v, x) for x, v in ((xs[k], vals[k]), (xstar, f(xstar)), (c, fc_), (d, fd_))
             if np.isfinite(v)]
    best = max(cands)
    return float(best[1]), float(best[0])


def solve_2x2(a11, a12, a21, a22, r1, r2, cond_tol: float = 1e-13):
    """Solve [[a11, a12], [a21, a22]] [x, y] = [r1, r2]; None if near-singular."""
    det = a11 * a22 - a12 * a21
    scale = max(abs(a11), abs(a12), abs(a21), abs(a22), 1e-300)
    if abs(det) <= cond_tol * scale * scale:
        return None
    x = (r1 * a22 - r2 * a12) / det
    y = (a11 * r2 - a21 * r1) / det
    return x, y
