"""
Quantum Latin isometry squares (QLIS) and skew projective permutation matrices.

An ``IsometrySquare`` is an ``n x n`` array of isometries ``k_ij: C^{a_ij} -> C^d``
with ``block_dims[i, j] == a_ij``; cells with ``a_ij == 0`` hold ``None``.
Composing two squares with identical ``block_dims`` cellwise,
``T_ij = q_ij @ k_ij^dagger``, gives a ``SkewPPM``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numlin import (
    DEFAULT_TOL,
    DimensionError,
    ValidationReport,
    check_tol,
    classify_operator,
    dagger,
    max_abs,
)
from .qls import QuantumLatinSquare


class CompositionError(ValueError):
    """The two squares cannot be composed into a skew PPM."""


@dataclass(frozen=True, eq=False)
class IsometrySquare:
    n: int
    d: int
    block_dims: np.ndarray
    blocks: tuple

    def __post_init__(self):
        n, d = int(self.n), int(self.d)
        if n < 1 or d < 1:
            raise DimensionError(f"need n, d >= 1, got n={n}, d={d}")
        dims = np.asarray(self.block_dims, dtype=int)
        if dims.shape != (n, n) or (dims < 0).any():
            raise DimensionError(f"block_dims must be a nonnegative {n}x{n} array")
        if len(self.blocks) != n or any(len(row) != n for row in self.blocks):
            raise DimensionError(f"blocks must be an {n}x{n} array")
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                blk, a = self.blocks[i][j], int(dims[i, j])
                if a == 0:
                    if blk is not None and np.asarray(blk).size:
                        raise DimensionError(f"block ({i},{j}) has a_ij = 0 but is not empty")
                    row.append(None)
                    continue
                if blk is None:
                    raise DimensionError(f"block ({i},{j}) is missing (a_ij = {a})")
                blk = np.array(blk, dtype=np.complex128)
                if blk.ndim == 1:
                    blk = blk.reshape(-1, 1)
                if blk.shape != (d, a):
                    raise DimensionError(f"block ({i},{j}) has shape {blk.shape}, expected {(d, a)}")
                if not np.all(np.isfinite(blk)):
                    raise ValueError(f"block ({i},{j}) has non-finite entries")
                blk.setflags(write=False)
                row.append(blk)
            rows.append(tuple(row))
        dims.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "blocks", tuple(rows))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence], d: int | None = None) -> "IsometrySquare":
        """Infer ``n``, ``d`` and ``block_dims`` from a nested list (``None`` = empty)."""
        n = len(blocks)
        dims = np.zeros((n, n), dtype=int)
        for i, j in itertools.product(range(n), repeat=2):
            blk = blocks[i][j]
            if blk is not None:
                blk = np.asarray(blk)
                if blk.ndim == 1:
                    blk = blk.reshape(-1, 1)
                dims[i, j] = blk.shape[1]
                d = blk.shape[0] if d is None else d
        if d is None:
            raise DimensionError("cannot infer d from an all-empty square")
        return cls(n, d, dims, tuple(tuple(r) for r in blocks))

    def block(self, i: int, j: int) -> np.ndarray:
        """Block ``(i, j)`` as a ``d x a_ij`` array (``d x 0`` when empty)."""
        blk = self.blocks[i][j]
        return np.zeros((self.d, 0), dtype=np.complex128) if blk is None else blk

    def range_projector(self, i: int, j: int) -> np.ndarray:
        blk = self.block(i, j)
        return blk @ dagger(blk)


@dataclass(frozen=True, eq=False)
class SkewPPM:
    n: int
    d: int
    parts: np.ndarray  # (n, n, d, d)

    def __post_init__(self):
        parts = np.array(self.parts, dtype=np.complex128)
        n, d = int(self.n), int(self.d)
        if parts.shape != (n, n, d, d):
            raise DimensionError(f"parts must have shape {(n, n, d, d)}, got {parts.shape}")
        parts.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "parts", parts)

    def nonzero_mask(self, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Cells whose max-modulus entry exceeds ``tol``."""
        return np.abs(self.parts).max(axis=(2, 3)) > tol


@dataclass(frozen=True)
class QlisOrthogonalityReport:
    passed: bool
    nonzero_count: int
    common_trace: float
    gram_violation: float
    s_isometry_violation: float
    gram_pass: bool
    s_pass: bool
    d: int
    n: int

    @property
    def routes_agree(self) -> bool:
        return self.gram_pass == self.s_pass


def _line_cells(n: int):
    """(label, cells) for every row then every column."""
    for i in range(n):
        yield f"row {i}", [(i, j) for j in range(n)]
    for j in range(n):
        yield f"col {j}", [(i, j) for i in range(n)]


def validate_qlis(s: IsometrySquare, tol: float = DEFAULT_TOL) -> ValidationReport:
    """
    Check the isometry-square axioms.

    Violation keys: ``isometry`` (each block), ``row_orthogonality`` /
    ``col_orthogonality`` (``k_ip^dagger k_iq`` for ``p != q`` along a line),
    ``row_completeness`` / ``col_completeness`` (the range projectors along a
    line sum to ``I_d``), and ``row_dims`` / ``col_dims`` (integer deviation
    of the ``a_ij`` line sums from ``d``).
    """
    tol = check_tol(tol)
    n, d = s.n, s.d
    iso = 0.0
    for i, j in itertools.product(range(n), repeat=2):
        if s.blocks[i][j] is not None:
            iso = max(iso, classify_operator(s.blocks[i][j], tol).isometry_violation)
    ortho = {"row": 0.0, "col": 0.0}
    complete = {"row": 0.0, "col": 0.0}
    for label, cells in _line_cells(n):
        kind = label.split()[0]
        present = [c for c in cells if s.blocks[c[0]][c[1]] is not None]
        for c1, c2 in itertools.combinations(present, 2):
            ortho[kind] = max(ortho[kind], max_abs(dagger(s.block(*c1)) @ s.block(*c2)))
        total = sum((s.range_projector(*c) for c in cells), np.zeros((d, d), dtype=np.complex128))
        complete[kind] = max(complete[kind], max_abs(total - np.eye(d)))
    dims = s.block_dims
    return ValidationReport.from_violations(
        {
            "isometry": iso,
            "row_orthogonality": ortho["row"],
            "col_orthogonality": ortho["col"],
            "row_completeness": complete["row"],
            "col_completeness": complete["col"],
            "row_dims": float(np.abs(dims.sum(axis=1) - d).max()),
            "col_dims": float(np.abs(dims.sum(axis=0) - d).max()),
        },
        tol,
    )


def embed_qls_as_qlis(q: QuantumLatinSquare) -> IsometrySquare:
    """View a QLS as an isometry square with every ``a_ij = 1`` and ``d = n``."""
    n = q.n
    blocks = tuple(tuple(q.entry(i, j) for j in range(n)) for i in range(n))
    return IsometrySquare(n, n, np.ones((n, n), dtype=int), blocks)


def diagonal_from_unitaries(family: Sequence, tol: float = DEFAULT_TOL) -> IsometrySquare:
    """Diagonal square with ``family[i]`` at ``(i, i)`` and empty cells elsewhere."""
    tol = check_tol(tol)
    family = [np.asarray(u, dtype=np.complex128) for u in family]
    if not family:
        raise ValueError("empty unitary family")
    d = family[0].shape[0]
    for idx, u in enumerate(family):
        if u.shape != (d, d):
            raise DimensionError(f"member {idx} has shape {u.shape}, expected {(d, d)}")
        if not classify_operator(u, tol).is_unitary:
            raise ValueError(f"member {idx} is not unitary")
    m = len(family)
    blocks = tuple(tuple(family[i] if i == j else None for j in range(m)) for i in range(m))
    return IsometrySquare(m, d, d * np.eye(m, dtype=int), blocks)


def identity_square(m: int, d: int) -> IsometrySquare:
    return diagonal_from_unitaries([np.eye(d)] * m)


def compose_skew_ppm(k: IsometrySquare, q: IsometrySquare, tol: float = DEFAULT_TOL) -> SkewPPM:
    """
    ``T_ij = q_ij @ k_ij^dagger`` (zero where ``a_ij = 0``).

    Both squares must validate and share ``n``, ``d`` and the exact
    ``block_dims`` array; cellwise composition needs matching shapes.
    """
    tol = check_tol(tol)
    if (k.n, k.d) != (q.n, q.d):
        raise CompositionError(f"size mismatch: (n, d) = {(k.n, k.d)} vs {(q.n, q.d)}")
    if not np.array_equal(k.block_dims, q.block_dims):
        raise CompositionError("block_dims differ cellwise")
    for name, sq in (("k", k), ("q", q)):
        rep = validate_qlis(sq, tol)
        if not rep.passed:
            raise CompositionError(f"{name} is not a valid isometry square: {rep.failures()}")
    n, d = k.n, k.d
    parts = np.zeros((n, n, d, d), dtype=np.complex128)
    for i, j in itertools.product(range(n), repeat=2):
        if k.blocks[i][j] is not None:
            parts[i, j] = q.blocks[i][j] @ dagger(k.blocks[i][j])
    return SkewPPM(n, d, parts)


def validate_skew_ppm(t: SkewPPM, tol: float = DEFAULT_TOL) -> ValidationReport:
    """
    Check the (C1)-(C4) conditions: partial isometries whose initial and final
    spaces partition ``C^d`` along every row and column.
    """
    tol = check_tol(tol)
    n, d = t.n, t.d
    eye = np.eye(d)
    parts = t.parts
    piso = max(
        classify_operator(parts[i, j], tol).partial_isometry_violation
        for i, j in itertools.product(range(n), repeat=2)
    )
    v = {"partial_isometry": piso}
    for kind in ("row", "col"):
        v[f"{kind}_initial_sum"] = 0.0
        v[f"{kind}_final_sum"] = 0.0
        v[f"{kind}_initial_overlap"] = 0.0
        v[f"{kind}_final_overlap"] = 0.0
    for label, cells in _line_cells(n):
        kind = label.split()[0]
        ops = [parts[c] for c in cells]
        init = sum(dagger(x) @ x for x in ops)
        fin = sum(x @ dagger(x) for x in ops)
        v[f"{kind}_initial_sum"] = max(v[f"{kind}_initial_sum"], max_abs(init - eye))
        v[f"{kind}_final_sum"] = max(v[f"{kind}_final_sum"], max_abs(fin - eye))
        for x, y in itertools.combinations(ops, 2):
            # initial spaces orthogonal <=> x y^dagger = 0; final spaces <=> x^dagger y = 0
            v[f"{kind}_initial_overlap"] = max(v[f"{kind}_initial_overlap"], max_abs(x @ dagger(y)))
            v[f"{kind}_final_overlap"] = max(v[f"{kind}_final_overlap"], max_abs(dagger(x) @ y))
    return ValidationReport.from_violations(v, tol)


def check_orthogonal_sppm(t: SkewPPM, tol: float = DEFAULT_TOL) -> QlisOrthogonalityReport:
    """
    Orthogonality of a skew PPM, decided by two independent routes.

    Gram route: the nonzero parts number ``d**2``, are pairwise trace-orthogonal
    and share one value ``a`` of ``Tr(T^dagger T)``.

    S route: with ``a = n / d`` (forced by rank counting, since the ranks sum
    to ``n*d``), the ``n**2 x d**2`` matrix whose row ``(i, j)`` is
    ``vec(T_ij) / sqrt(a)`` is an isometry.
    """
    tol = check_tol(tol)
    n, d = t.n, t.d
    mask = t.nonzero_mask(tol).ravel()
    flat = t.parts.reshape(n * n, d * d)
    nz = flat[mask]
    count = int(mask.sum())
    if count:
        gram = np.conj(nz) @ nz.T
        diag = np.real(np.diag(gram))
        a = float(diag.mean())
        off = gram - np.diag(np.diag(gram))
        gram_violation = max(max_abs(off), float(np.abs(diag - a).max()))
    else:
        a = 0.0
        gram_violation = float("inf")
    gram_pass = count == d * d and gram_violation <= tol

    s = flat / np.sqrt(n / d)
    s_violation = max_abs(dagger(s) @ s - np.eye(d * d))
    s_pass = s_violation <= tol
    return QlisOrthogonalityReport(
        passed=gram_pass and s_pass,
        nonzero_count=count,
        common_trace=a,
        gram_violation=gram_violation,
        s_isometry_violation=s_violation,
        gram_pass=gram_pass,
        s_pass=s_pass,
        d=d,
        n=n,
    )


def check_orthogonal_qlis(
    k: IsometrySquare, q: IsometrySquare, tol: float = DEFAULT_TOL
) -> QlisOrthogonalityReport:
    return check_orthogonal_sppm(compose_skew_ppm(k, q, tol), tol)


def check_mutually_orthogonal_qlis(
    family: Sequence[IsometrySquare], tol: float = DEFAULT_TOL
) -> dict[tuple[int, int], QlisOrthogonalityReport]:
    """Pairwise reports for every ``(g, h)``, ``g < h``; composed as ``q_h k_g^dagger``."""
    return {
        (g, h): check_orthogonal_qlis(family[g], family[h], tol)
        for g, h in itertools.combinations(range(len(family)), 2)
    }
