"""
Dense complex linear algebra and toleranced operator predicates.

Every matrix in the package is a 2-d ``numpy.complex128`` array; vectors are
stored as ``(n, 1)`` columns. Predicates compare entrywise against an absolute
tolerance using the max-modulus norm, which is interpretable at the small
sizes (at most a few hundred rows) this package deals with.

Vectorization is row-major throughout, so ``trace_inner(a, b)`` equals
``vdot(vectorize(a), vectorize(b))`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


class DimensionError(ValueError):
    """Raised when operand shapes or tensor-factor dimensions do not fit."""


def check_tol(tol: float) -> float:
    tol = float(tol)
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol!r}")
    return tol


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d complex array (1-d input becomes a column)."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def ket(i: int, n: int) -> np.ndarray:
    """Computational basis column vector ``|i>`` in ``C^n``."""
    v = np.zeros((n, 1), dtype=np.complex128)
    v[i, 0] = 1.0
    return v


def ketbra(i: int, j: int, n: int, m: int | None = None) -> np.ndarray:
    """Matrix unit ``|i><j|`` of shape ``(n, m)`` (square when ``m`` is omitted)."""
    out = np.zeros((n, n if m is None else m), dtype=np.complex128)
    out[i, j] = 1.0
    return out


def max_abs(m) -> float:
    """Max-modulus entry, 0.0 for empty arrays."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*b.rows + k, j*b.cols + l)`` is ``a[i,j]*b[k,l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = kron(out, f)
    return out


def _check_dims(size: int, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionError(f"factor dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != size:
        raise DimensionError(f"product of dims {dims} is {int(np.prod(dims))}, expected {size}")
    return dims


def _check_keep(keep: Iterable[int], nfactors: int) -> list[int]:
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= nfactors for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {nfactors} factors")
    return keep


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """
    Reduce an operator on ``C^dims[0] (x) ... (x) C^dims[-1]`` to the factors in ``keep``.

    Kept factors stay in ascending order. Tracing out every factor returns the
    ``1x1`` trace.

    >>> partial_trace(np.eye(4), [2, 2], keep=[1]).real
    array([[2., 0.],
           [0., 2.]])
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"partial trace needs a square operator, got {m.shape}")
    dims = _check_dims(m.shape[0], dims)
    keep = _check_keep(keep, len(dims))
    k = len(dims)
    t = m.reshape(dims + dims)
    row = list(range(k))
    col = [k + f if f in keep else f for f in range(k)]
    out_idx = keep + [k + f for f in keep]
    reduced = np.einsum(t, row + col, out_idx)
    size = int(np.prod([dims[f] for f in keep])) if keep else 1
    return np.asarray(reduced).reshape(size, size)


def reduced_state(psi, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """
    Partial trace of the rank-one operator ``|psi><psi|`` without forming it.

    Used where the full operator would be too large to hold (``n**(m+2)``-sized
    family states).
    """
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    dims = _check_dims(psi.size, dims)
    keep = _check_keep(keep, len(dims))
    traced = [f for f in range(len(dims)) if f not in keep]
    t = np.transpose(psi.reshape(dims), keep + traced)
    rows = int(np.prod([dims[f] for f in keep])) if keep else 1
    a = t.reshape(rows, -1)
    return a @ dagger(a)


def trace_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``Tr(a^dagger b)``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def vectorize(m) -> np.ndarray:
    """Row-major stacking of ``m`` into a column vector."""
    return as_matrix(m).reshape(-1, 1)


@dataclass(frozen=True)
class ValidationReport:
    """Named violations (max-modulus deviations); ``passed`` iff all are within ``tol``."""

    passed: bool
    violations: dict[str, float]
    tol: float

    @classmethod
    def from_violations(cls, violations: dict[str, float], tol: float) -> "ValidationReport":
        violations = {k: float(v) for k, v in violations.items()}
        return cls(all(v <= tol for v in violations.values()), violations, tol)

    @property
    def worst(self) -> tuple[str, float] | None:
        """Largest violation, first in insertion order among ties."""
        if not self.violations:
            return None
        key = max(self.violations, key=lambda k: self.violations[k])
        return key, self.violations[key]

    def failures(self) -> dict[str, float]:
        return {k: v for k, v in self.violations.items() if v > self.tol}


@dataclass(frozen=True)
class OperatorClassReport:
    is_isometry: bool
    is_unitary: bool
    is_partial_isometry: bool
    is_projector: bool
    rank_estimate: int | None
    rank_consistent: bool
    isometry_violation: float
    partial_isometry_violation: float


def classify_operator(m, tol: float = DEFAULT_TOL) -> OperatorClassReport:
    """
    Classify ``m`` as isometry / unitary / partial isometry / projector.

    ``rank_estimate`` is ``round(Tr(m^dagger m))`` for partial isometries;
    ``rank_consistent`` is False when that trace sits further than
    ``cols * tol`` from the nearest integer.
    """
    tol = check_tol(tol)
    m = as_matrix(m)
    rows, cols = m.shape
    mhm = dagger(m) @ m
    iso_violation = max_abs(mhm - np.eye(cols))
    is_isometry = iso_violation <= tol
    piso_violation = max_abs(m @ dagger(m) @ m - m)
    is_partial = piso_violation <= tol
    square = rows == cols
    is_projector = (
        square and max_abs(m @ m - m) <= tol and max_abs(dagger(m) - m) <= tol
    )
    rank = None
    consistent = True
    if is_partial:
        tr = float(np.trace(mhm).real)
        rank = int(round(tr))
        consistent = abs(tr - rank) <= cols * tol
    return OperatorClassReport(
        is_isometry=is_isometry,
        is_unitary=is_isometry and square,
        is_partial_isometry=is_partial,
        is_projector=bool(is_projector),
        rank_estimate=rank,
        rank_consistent=consistent,
        isometry_violation=iso_violation,
        partial_isometry_violation=piso_violation,
    )


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    return classify_operator(m, tol).is_unitary


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    if cols > rows:
        raise DimensionError(f"no isometry C^{cols} -> C^{rows}")
    return random_unitary(rows, rng)[:, :cols]


def random_phases(shape, rng: np.random.Generator) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(shape))
