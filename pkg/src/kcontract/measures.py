"""Matrix measures (logarithmic norms) for a matrix and its additive compounds.

The L1/L2/Linf measures of A come from the standard column-sum, symmetric
eigenvalue, and row-sum formulas.  The measure of the k-th additive compound
A^[k] is evaluated either by materializing the compound (measure of
add_compound) or, preferably, by the closed-form k-compound rules which never
build the compound: max over k-tuples of signed diagonal sums plus absolute
off-tuple column/row sums for L1/Linf, and the sum of the k largest
eigenvalues of the symmetric part for L2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .compound import as_matrix
from .errors import NonConvergence, OrderTooLarge, SingularScaling

# Reciprocal-condition refusal threshold for scaling matrices.
RCOND_MIN = 1e-12

JACOBI_MAX_SWEEPS = 50
JACOBI_TOL = 1e-12


class Norm(Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, s: str) -> "Norm":
        key = s.strip().lower()
        aliases = {"1": "l1", "2": "l2", "inf": "linf", "l-inf": "linf"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class MeasureSpec:
    """Which induced measure to evaluate, optionally of M A M^{-1}."""

    norm: Norm = Norm.L2
    scaling: np.ndarray | None = None


@dataclass(frozen=True)
class MeasureValue:
    """A measure value with the witness that attains it.

    For L1/Linf the witness is the (lexicographically smallest) attaining
    1-based index tuple; for L2 it is the eigenvector (k = 1) or the top-k
    eigenvalues of the symmetric part.
    """

    value: float
    witness: object


def apply_scaling(a: np.ndarray, scaling) -> np.ndarray:
    """Return M A M^{-1}, refusing scalings with rcond below 1e-12."""
    m = as_matrix(scaling, square=True)
    if m.shape != a.shape:
        raise SingularScaling(f"scaling shape {m.shape} != matrix shape {a.shape}")
    try:
        minv = np.linalg.inv(m)
    except np.linalg.LinAlgError as exc:
        raise SingularScaling("scaling matrix is singular") from exc
    rcond = 1.0 / (np.linalg.norm(m, 1) * np.linalg.norm(minv, 1))
    if rcond < RCOND_MIN:
        raise SingularScaling(f"scaling rcond estimate {rcond:.3e} below {RCOND_MIN}")
    return m @ a @ minv


def symmetric_eigh(s, max_sweeps: int = JACOBI_MAX_SWEEPS, compute_vectors: bool = True):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (values, vectors) with values sorted descending and vectors in
    matching columns (vectors is None when compute_vectors is False).  The
    input is symmetrized first; sweeps stop once the off-diagonal Frobenius
    norm falls below 1e-12 times the matrix norm.
    """
    a = as_matrix(s, square=True)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n) if compute_vectors else None
    if n == 1:
        return a[0, :1].copy(), v
    norm_s = np.linalg.norm(a)
    if norm_s == 0.0:
        return np.zeros(n), v
    tol = JACOBI_TOL * norm_s
    # entries this small cannot lift the off-norm above tol; skip rotating them
    skip = tol / (2.0 * n)

    converged = False
    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.square(a - np.diag(np.diag(a)))))
        if off < tol:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * c
                rot_p = a[:, p].copy()
                rot_q = a[:, q].copy()
                a[:, p] = c * rot_p - sn * rot_q
                a[:, q] = sn * rot_p + c * rot_q
                rot_p = a[p, :].copy()
                rot_q = a[q, :].copy()
                a[p, :] = c * rot_p - sn * rot_q
                a[q, :] = sn * rot_p + c * rot_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                if compute_vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - sn * vq
                    v[:, q] = sn * vp + c * vq
    if not converged:
        raise NonConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    values = np.diag(a).copy()
    order = np.argsort(-values)
    return values[order], (v[:, order] if compute_vectors else None)


def symmetric_eigenvalues(s, max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Descending eigenvalues of a symmetric matrix (cyclic Jacobi)."""
    values, _ = symmetric_eigh(s, max_sweeps=max_sweeps, compute_vectors=False)
    return values


def _measure_witness_plain(a: np.ndarray, norm: Norm) -> MeasureValue:
    n = a.shape[0]
    aabs = np.abs(a)
    if norm is Norm.L1:
        cols = np.diag(a) + aabs.sum(axis=0) - np.diag(aabs)
        j = int(np.argmax(cols))  # argmax returns the first (smallest) index on ties
        return MeasureValue(float(cols[j]), (j + 1,))
    if norm is Norm.LINF:
        rows = np.diag(a) + aabs.sum(axis=1) - np.diag(aabs)
        i = int(np.argmax(rows))
        return MeasureValue(float(rows[i]), (i + 1,))
    values, vectors = symmetric_eigh(0.5 * (a + a.T))
    return MeasureValue(float(values[0]), vectors[:, 0].copy())


def measure_witness(a, spec: MeasureSpec) -> MeasureValue:
    """Measure of A (or M A M^{-1}) together with the attaining witness."""
    m = as_matrix(a, square=True)
    if spec.scaling is not None:
        m = apply_scaling(m, spec.scaling)
    return _measure_witness_plain(m, spec.norm)


def measure(a, spec: MeasureSpec) -> float:
    """mu_1, mu_2, or mu_inf of A, optionally of M A M^{-1}."""
    return measure_witness(a, spec).value


def measure_k_witness(a, k: int, spec: MeasureSpec) -> MeasureValue:
    """Measure of A^[k] by the closed-form k-compound rules, with witness.

    Equals measure(add_compound(A, k), spec) but never materializes the
    compound.  The spec must carry no scaling (scalings act on state space
    and should be applied to A before calling).
    """
    m = as_matrix(a, square=True)
    if spec.scaling is not None:
        raise SingularScaling("measure_k_direct takes an unscaled spec; conjugate A first")
    n = m.shape[0]
    if k < 1 or k > n:
        raise OrderTooLarge(f"k={k} outside [1, {n}]")

    if spec.norm is Norm.L2:
        values = symmetric_eigenvalues(0.5 * (m + m.T))
        return MeasureValue(float(np.sum(values[:k])), values[:k].copy())

    aabs = np.abs(m)
    diag = np.diag(m)
    if spec.norm is Norm.L1:
        col_abs = aabs.sum(axis=0) - np.diag(aabs)
    else:
        row_abs = aabs.sum(axis=1) - np.diag(aabs)

    best = -np.inf
    best_tuple: tuple[int, ...] | None = None
    for combo in itertools.combinations(range(n), k):
        ix = np.asarray(combo, dtype=int)
        inside = aabs[np.ix_(ix, ix)].sum() - aabs[ix, ix].sum()
        if spec.norm is Norm.L1:
            val = diag[ix].sum() + col_abs[ix].sum() - inside
        else:
            val = diag[ix].sum() + row_abs[ix].sum() - inside
        if val > best:
            best = val
            best_tuple = tuple(int(i) + 1 for i in combo)
    return MeasureValue(float(best), best_tuple)


def measure_k_direct(a, k: int, spec: MeasureSpec) -> float:
    """Measure of the k-th additive compound without materializing it."""
    return measure_k_witness(a, k, spec).value
