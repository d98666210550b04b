"""One-variable views of functions restricted to a complex line.

A LineView represents u -> h(u*xi) for a fixed direction xi.  Views expose
log-domain evaluation (log_values, whose real part is log|h|) so that
high-degree compositions never overflow, plus certified zero/pole multisets
inside a disk when the variant knows its divisor in closed form
(has_closed_zeros).  Entire views without closed zeros are still countable
downstream through the Jensen integral.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np

from .errors import NumericError, UsageError
from .roots import univariate_roots

RootList = List[Tuple[complex, int]]

_MATCH_TOL = 1e-9


class LineView:
    identically_zero = False
    is_entire = True
    has_closed_zeros = True

    def log_values(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def log_abs(self, u: np.ndarray) -> np.ndarray:
        return self.log_values(u).real

    def zeros(self, r: float) -> RootList:
        raise NotImplementedError

    def poles(self, r: float) -> RootList:
        return []


def _cancel(zeros: RootList, poles: RootList) -> Tuple[RootList, RootList]:
    """Remove common points (restriction may create removable factors)."""
    if not zeros or not poles:
        return zeros, poles
    zs = [list(t) for t in zeros]
    for i, (p, pm) in enumerate(poles):
        if pm <= 0:
            continue
        for z in zs:
            if z[1] > 0 and abs(z[0] - p) <= _MATCH_TOL * (1.0 + abs(p)):
                k = min(z[1], pm)
                z[1] -= k
                pm -= k
                if pm == 0:
                    break
        poles[i] = (p, pm)
    return ([(a, m) for a, m in zs if m > 0],
            [(a, m) for a, m in poles if m > 0])


class ConstantLineView(LineView):
    def __init__(self, value: complex):
        self.value = complex(value)
        self.identically_zero = (self.value == 0)

    def log_values(self, u):
        u = np.asarray(u)
        with np.errstate(divide="ignore"):
            return np.full(u.shape, np.log(complex(self.value))
                           if self.value else complex("-inf"))

    def zeros(self, r):
        return []


class RationalLineView(LineView):
    """num(u)/den(u) with double-precision coefficients (ascending)."""

    def __init__(self, num: np.ndarray, den: np.ndarray, tol: float = 1e-8):
        self.num = np.asarray(num, dtype=complex)
        self.den = np.asarray(den, dtype=complex)
        self.tol = tol
        if not np.any(self.den):
            raise UsageError("denominator vanishes identically on the line")
        self.identically_zero = not np.any(self.num)
        dscale = float(np.max(np.abs(self.den)))
        sig = np.nonzero(np.abs(self.den) > 1e-14 * dscale)[0]
        self.is_entire = int(np.max(sig)) == 0
        self._cache = None

    def log_values(self, u):
        u = np.asarray(u, dtype=complex)
        nv = np.polynomial.polynomial.polyval(u, self.num)
        dv = np.polynomial.polynomial.polyval(u, self.den)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(nv.astype(complex)) - np.log(dv.astype(complex))

    def _roots(self):
        if self._cache is None:
            z = univariate_roots(self.num, self.tol).roots \
                if np.any(self.num) else []
            p = univariate_roots(self.den, self.tol).roots
            self._cache = _cancel(list(z), list(p))
        return self._cache

    def zeros(self, r):
        if self.identically_zero:
            raise UsageError("identically zero on the line")
        return [(a, m) for a, m in self._roots()[0] if abs(a) <= r]

    def poles(self, r):
        return [(a, m) for a, m in self._roots()[1] if abs(a) <= r]


class PochhammerLineView(LineView):
    """u -> prod_{k>=0} (1 - (a*u + b) * qbase^k), truncated adaptively."""

    def __init__(self, qbase: complex, a: complex, b: complex,
                 tail: float = 1e-15):
        if not 0 < abs(qbase) < 1:
            raise UsageError("product base must satisfy 0 < |q| < 1")
        self.qbase = complex(qbase)
        self.a = complex(a)
        self.b = complex(b)
        self.tail = tail
        if self.a == 0:
            v = self._const_value()
            self.identically_zero = (v == 0)

    def _nterms(self, lmax: float) -> int:
        if lmax <= 0:
            return 1
        # |l| * |q|^k < tail
        k = math.log(self.tail / max(lmax, self.tail)) / math.log(abs(self.qbase))
        return max(1, int(math.ceil(k)) + 1)

    def _const_value(self) -> complex:
        n = self._nterms(abs(self.b))
        out = 1.0 + 0j
        for k in range(n):
            out *= 1 - self.b * self.qbase**k
        return out

    def log_values(self, u):
        u = np.asarray(u, dtype=complex)
        ell = self.a * u + self.b
        n = self._nterms(float(np.max(np.abs(ell))) if ell.size else 0.0)
        out = np.zeros(u.shape, dtype=complex)
        qk = 1.0 + 0j
        with np.errstate(divide="ignore", invalid="ignore"):
            for _ in range(n):
                out = out + np.log(1 - ell * qk)
                qk *= self.qbase
        return out

    def zeros(self, r):
        """Solutions of a*u + b = qbase^{-k}, k >= 0, inside |u| <= r."""
        if self.a == 0:
            if self.identically_zero:
                raise UsageError("identically zero on the line")
            return []
        out = []
        k = 0
        while True:
            target = self.qbase ** (-k)
            u = (target - self.b) / self.a
            if abs(u) <= r:
                out.append((u, 1))
            elif abs(target) > abs(self.a) * r + abs(self.b) + 1:
                break
            k += 1
            if k > 100000:
                raise NumericError("zero enumeration did not terminate")
        out.sort(key=lambda t: abs(t[0]))
        return out


class ProductLineView(LineView):
    def __init__(self, views: Sequence[LineView]):
        self.views = list(views)
        self.identically_zero = any(v.identically_zero for v in self.views)
        self.is_entire = all(v.is_entire for v in self.views)
        self.has_closed_zeros = all(v.has_closed_zeros for v in self.views)

    def log_values(self, u):
        u = np.asarray(u, dtype=complex)
        out = np.zeros(u.shape, dtype=complex)
        for v in self.views:
            out = out + v.log_values(u)
        return out

    def zeros(self, r):
        z: RootList = []
        p: RootList = []
        for v in self.views:
            z.extend(v.zeros(r))
            p.extend(v.poles(r))
        return _cancel(z, p)[0]

    def poles(self, r):
        z: RootList = []
        p: RootList = []
        for v in self.views:
            z.extend(v.zeros(r))
            p.extend(v.poles(r))
        return _cancel(z, p)[1]


class QuotientLineView(LineView):
    def __init__(self, num: LineView, den: LineView):
        if den.identically_zero:
            raise UsageError("denominator vanishes identically on the line")
        self.num = num
        self.den = den
        self.identically_zero = num.identically_zero
        self.is_entire = False
        self.has_closed_zeros = num.has_closed_zeros and den.has_closed_zeros

    def log_values(self, u):
        return self.num.log_values(u) - self.den.log_values(u)

    def _divisor(self, r):
        z = list(self.num.zeros(r)) + list(self.den.poles(r))
        p = list(self.num.poles(r)) + list(self.den.zeros(r))
        return _cancel(z, p)

    def zeros(self, r):
        if self.identically_zero:
            raise UsageError("identically zero on the line")
        return self._divisor(r)[0]

    def poles(self, r):
        return self._divisor(r)[1]


class FormCompositionLineView(LineView):
    """sum_I a_I * prod_j comp_j(u)^{I_j}, evaluated in the log domain.

    Zero/pole sets are not known in closed form; when every component is
    entire the view is entire and downstream counting goes through Jensen.
    """

    def __init__(self, coeffs: Sequence[Tuple[complex, Tuple[int, ...]]],
                 components: Sequence[LineView]):
        if not coeffs:
            raise UsageError("empty form")
        self.coeffs = [(complex(c), tuple(e)) for c, e in coeffs]
        self.components = list(components)
        self.is_entire = all(v.is_entire for v in self.components)
        self.has_closed_zeros = False
        self.identically_zero = False  # caller rules this out symbolically

    def log_values(self, u):
        u = np.asarray(u, dtype=complex)
        logs = [v.log_values(u) for v in self.components]
        term_logs = []
        for c, exps in self.coeffs:
            t = np.full(u.shape, np.log(complex(c)) if c else complex("-inf"))
            for lv, e in zip(logs, exps):
                if e:
                    t = t + e * lv
            term_logs.append(t)
        stack = np.stack(term_logs)
        shift = np.max(stack.real, axis=0)
        shift = np.where(np.isfinite(shift), shift, 0.0)
        total = np.sum(np.exp(stack - shift), axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return shift + np.log(total.astype(complex))

    def zeros(self, r):
        raise UsageError("composition view has no closed-form zero set")


class MonomialDeterminantLineView(LineView):
    """Determinant whose (k, I) entry is the monomial prod_j c_j^{I_j}
    evaluated on the k-th shifted copy of the component views.

    Exploits the monomial structure: each row needs only the component
    logs once, and every entry is an integer combination of them.
    """

    def __init__(self, shifted_components, monomials):
        # shifted_components[k][j]: LineView of component j under shift k
        self.rows = [list(r) for r in shifted_components]
        self.monos = [tuple(e) for e in monomials]
        if len(self.rows) != len(self.monos):
            raise UsageError("need as many shifts as monomials")
        self.is_entire = all(v.is_entire for r in self.rows for v in r)
        self.has_closed_zeros = False
        self.identically_zero = False

    def log_values(self, u):
        u = np.asarray(u, dtype=complex)
        flat = u.ravel()
        M = len(self.monos)
        logm = np.empty((flat.size, M, M), dtype=complex)
        emat = np.asarray(self.monos, dtype=float)  # (M, n1)
        for k, row in enumerate(self.rows):
            comp = np.stack([v.log_values(flat) for v in row], axis=1)
            logm[:, k, :] = comp @ emat.T
        out = _scaled_slogdet(logm)
        return out.reshape(u.shape)

    def zeros(self, r):
        raise UsageError("determinant view has no closed-form zero set")


def _assignment_scale(a: np.ndarray) -> float:
    """Optimal-assignment sum of Re(a): the log magnitude of the largest
    single permutation term of det exp(a), a sharp scale for deciding
    whether the determinant is negligible relative to its entries."""
    from scipy.optimize import linear_sum_assignment

    w = np.where(np.isfinite(a.real), a.real, -1e300)
    rows, cols = linear_sum_assignment(-w)
    return float(w[rows, cols].sum())


def _tropical_slogdet(a: np.ndarray) -> complex:
    """log|det exp(a)| for one n x n log matrix via assignment scaling.

    The optimal-assignment duals (u, v) satisfy u_k + v_l >= Re a[k,l]
    with equality along the matching, so exp(a - u - v) has every entry
    of magnitude <= 1 and magnitude 1 on a full transversal: no row or
    column can underflow, whatever the grading of the original entries.
    """
    from scipy.optimize import linear_sum_assignment

    n = a.shape[0]
    w = np.where(np.isfinite(a.real), a.real, -1e300)
    rows, cols = linear_sum_assignment(-w)
    sigma = np.empty(n, dtype=int)
    sigma[rows] = cols
    diag = w[np.arange(n), sigma]
    # duals by longest paths: v_l >= v_{sigma(k)} + (w[k,l] - w[k,sigma(k)])
    d = w - diag[:, None]
    v = np.zeros(n)
    for _ in range(n + 1):
        vn = np.maximum(v, np.max(v[sigma][:, None] + d, axis=0))
        if np.all(vn - v <= 1e-9):
            break
        v = vn
    u = diag - v[sigma]
    with np.errstate(under="ignore"):
        sign, logabs = np.linalg.slogdet(np.exp(a - u[:, None] - v[None, :]))
    if sign == 0:
        return complex("-inf")
    return complex(logabs + u.sum() + v.sum())


def _scaled_slogdet(logm: np.ndarray) -> np.ndarray:
    """log|det exp(logm)| for stacked (..., n, n) log matrices, with row
    and column scaling so no row or column underflows to zero; strongly
    graded matrices fall back to assignment-based scaling per node."""
    rowmax = np.max(logm.real, axis=-1, keepdims=True)
    rowmax = np.where(np.isfinite(rowmax), rowmax, 0.0)
    l2 = logm - rowmax
    colmax = np.max(l2.real, axis=-2, keepdims=True)
    colmax = np.where(np.isfinite(colmax), colmax, 0.0)
    with np.errstate(under="ignore"):
        sign, logabs = np.linalg.slogdet(np.exp(l2 - colmax))
    out = np.asarray(logabs + np.sum(rowmax, axis=(-1, -2))
                     + np.sum(colmax, axis=(-1, -2)), dtype=complex)
    out = np.where(np.asarray(sign) == 0, complex("-inf"), out)
    out = np.atleast_1d(out)
    redo = np.atleast_1d((np.asarray(sign) == 0) | (np.asarray(logabs) < -300.0))
    if np.any(redo):
        flat = logm.reshape(-1, *logm.shape[-2:])
        oflat = out.reshape(-1)
        for i in np.nonzero(redo.reshape(-1))[0]:
            oflat[i] = _tropical_slogdet(flat[i])
        out = oflat.reshape(redo.shape)
    return out.reshape(np.asarray(logm).shape[:-2])


class DeterminantLineView(LineView):
    """|det| of a matrix of views, via row-scaled slogdet.

    Only the magnitude is defined (slogdet drops the phase); log_values
    returns log|det| with zero imaginary part, which is all the counting
    and proximity integrals need.
    """

    def __init__(self, matrix: Sequence[Sequence[LineView]]):
        self.matrix = [list(row) for row in matrix]
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise UsageError("determinant view needs a square matrix")
        self.is_entire = all(v.is_entire for row in self.matrix for v in row)
        self.has_closed_zeros = False
        self.identically_zero = False  # decided by the caller's sampling

    def log_values(self, u):
        u = np.asarray(u, dtype=complex)
        n = len(self.matrix)
        logm = np.empty((u.size, n, n), dtype=complex)
        flat = u.ravel()
        for i, row in enumerate(self.matrix):
            for j, v in enumerate(row):
                logm[:, i, j] = v.log_values(flat)
        return _scaled_slogdet(logm).reshape(u.shape)

    def zeros(self, r):
        raise UsageError("determinant view has no closed-form zero set")
