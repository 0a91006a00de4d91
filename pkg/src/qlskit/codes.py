"""
Error-detecting encoders from orthogonal isometry-square pairs, and unitary
error bases.

The encoder of a skew PPM ``T`` is the isometry

    V = n**-1/2 * sum_ij |i> (x) T_ij (x) |j>  :  C^d -> C^n (x) C^d (x) C^n

with legs ordered (row index, middle, column index). The unnormalized map
satisfies ``sum_ij T_ij^dagger T_ij = n I_d``, hence the ``1/sqrt(n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .numlin import (
    DEFAULT_TOL,
    DimensionError,
    check_tol,
    classify_operator,
    dagger,
    max_abs,
    trace_inner,
)
from .qlis import (
    IsometrySquare,
    QlisOrthogonalityReport,
    SkewPPM,
    check_orthogonal_qlis,
    check_orthogonal_sppm,
    compose_skew_ppm,
    diagonal_from_unitaries,
    identity_square,
)


class NotOrthogonalError(ValueError):
    """An operation needed an orthogonal pair and did not get one."""

    def __init__(self, message: str, report: QlisOrthogonalityReport | None = None):
        super().__init__(message)
        self.report = report


class NotUEBError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EncoderTensor:
    """One-to-three map stored as a ``(prod(legs), logical_dim)`` matrix."""

    legs: tuple[int, ...]
    map: np.ndarray
    normalization: float = 1.0

    def __post_init__(self):
        m = np.array(self.map, dtype=np.complex128)
        legs = tuple(int(x) for x in self.legs)
        if m.ndim != 2 or m.shape[0] != int(np.prod(legs)):
            raise DimensionError(f"map of shape {m.shape} does not match legs {legs}")
        m.setflags(write=False)
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "map", m)

    @property
    def logical_dim(self) -> int:
        return self.map.shape[1]

    @property
    def n(self) -> int:
        return self.legs[0]

    @property
    def d(self) -> int:
        return self.logical_dim

    def tensor(self) -> np.ndarray:
        """The map as an array indexed ``[leg_0, ..., leg_k, logical]``."""
        return self.map.reshape(self.legs + (self.logical_dim,))


@dataclass(frozen=True)
class KLReport:
    method: str
    passed: bool
    violations: dict[str, float]
    witness: tuple | None = None
    generic_pass: bool | None = None
    scalars: dict[str, complex] = field(default_factory=dict)


@dataclass(frozen=True)
class UnitaryFamily:
    d: int
    members: tuple

    def __post_init__(self):
        d = int(self.d)
        members = []
        for idx, u in enumerate(self.members):
            u = np.array(u, dtype=np.complex128)
            if u.shape != (d, d):
                raise DimensionError(f"member {idx} has shape {u.shape}, expected {(d, d)}")
            u.setflags(write=False)
            members.append(u)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "members", tuple(members))


@dataclass(frozen=True)
class UEBReport:
    passed: bool
    count: int
    expected_count: int
    all_unitary: bool
    gram_violation: float

    def __bool__(self) -> bool:
        return self.passed


def encoder_from_sppm(t: SkewPPM) -> EncoderTensor:
    """Normalized encoder of ``t``; no orthogonality check."""
    n, d = t.n, t.d
    # V[(i, y, j), x] = T_ij[y, x] / sqrt(n)
    v = np.transpose(t.parts, (0, 2, 1, 3)).reshape(n * d * n, d) / np.sqrt(n)
    return EncoderTensor((n, d, n), v, 1.0 / np.sqrt(n))


def build_encoder(k: IsometrySquare, q: IsometrySquare, tol: float = DEFAULT_TOL) -> EncoderTensor:
    tol = check_tol(tol)
    t = compose_skew_ppm(k, q, tol)
    report = check_orthogonal_sppm(t, tol)
    if not report.passed:
        raise NotOrthogonalError("isometry squares are not orthogonal", report)
    return encoder_from_sppm(t)


def build_encoder_from_sppm(t: SkewPPM, tol: float = DEFAULT_TOL) -> EncoderTensor:
    tol = check_tol(tol)
    report = check_orthogonal_sppm(t, tol)
    if not report.passed:
        raise NotOrthogonalError("skew PPM is not orthogonal", report)
    return encoder_from_sppm(t)


def _bent_operator(e: np.ndarray, leg: int) -> np.ndarray:
    """
    ``sum_{others} |E_..l..><E_..k..| (x) |l><k|`` on ``C^a (x) C^{leg}``.

    ``|E_ijk>`` is the conjugated row ``(i, j, k)`` of the map, so entry
    ``[(x, l), (y, k)]`` is ``sum conj(V[.., l, .., x]) V[.., k, .., y]``.
    """
    moved = np.moveaxis(e, leg, -2)  # [..others.., leg, logical]
    L, a = moved.shape[-2], moved.shape[-1]
    flat = moved.reshape(-1, L * a)
    r = np.conj(flat).T @ flat  # index (l, x), (k, y)
    r = r.reshape(L, a, L, a).transpose(1, 0, 3, 2)
    return r.reshape(a * L, a * L)


KL_CONDITIONS = {"eq11": 2, "eq12": 1, "eq13": 0}  # condition -> bent leg


def check_kl_paper(e: EncoderTensor, tol: float = DEFAULT_TOL) -> KLReport:
    """
    The three leg-bending identities of the Knill-Laflamme detection theorem.

    Bending leg ``L`` (dimension ``D_L``) across to the input side must give
    ``(1 / D_L) * I`` on ``C^a (x) C^{D_L}``: the constant follows from
    ``V^dagger V = I_a``. Works for any number of legs of any dimensions, keyed
    ``eq11`` (last leg), ``eq12`` (middle), ``eq13`` (first) for three legs.
    """
    tol = check_tol(tol)
    t = e.tensor()
    a = e.logical_dim
    if len(e.legs) == 3:
        keys = KL_CONDITIONS
    else:
        keys = {f"leg{L}": L for L in range(len(e.legs))}
    violations = {}
    scalars = {}
    for name, leg in keys.items():
        dim = e.legs[leg]
        r = _bent_operator(t, leg)
        violations[name] = max_abs(r - np.eye(a * dim) / dim)
        scalars[name] = 1.0 / dim
    worst = max(violations, key=lambda k: violations[k])
    passed = violations[worst] <= tol
    return KLReport(
        method="leg_bending",
        passed=passed,
        violations=violations,
        witness=None if passed else (worst,),
        scalars=scalars,
    )


def weyl_basis(n: int) -> list[tuple[str, np.ndarray]]:
    """Shift/clock products ``X^s Z^c`` (unnormalized unitaries), labelled ``"X^s Z^c"``."""
    omega = np.exp(2j * np.pi / n)
    shift = np.roll(np.eye(n, dtype=np.complex128), 1, axis=0)  # X|j> = |j+1>
    clock = np.diag(omega ** np.arange(n))
    out = []
    for s, c in itertools.product(range(n), repeat=2):
        op = np.linalg.matrix_power(shift, s) @ np.linalg.matrix_power(clock, c)
        out.append((f"X^{s} Z^{c}", op))
    return out


def check_kl_generic(e: EncoderTensor, tol: float = DEFAULT_TOL) -> KLReport:
    """
    Single-error detection against a full operator basis on each leg.

    For every Weyl operator ``E`` on leg ``L`` (scaled to unit Hilbert-Schmidt
    norm) and identity elsewhere, ``V^dagger E V`` must equal ``lambda_E I``.
    The first failing ``(leg, label)`` in sweep order is the witness.
    """
    tol = check_tol(tol)
    t = e.tensor()
    a = e.logical_dim
    flat_v = e.map
    violations: dict[str, float] = {}
    scalars: dict[str, complex] = {}
    witness = None
    for leg, dim in enumerate(e.legs):
        leg_worst = 0.0
        for label, op in weyl_basis(dim):
            op = op / np.sqrt(dim)
            applied = np.moveaxis(np.tensordot(op, t, axes=([1], [leg])), 0, leg)
            m = dagger(flat_v) @ applied.reshape(-1, a)
            lam = np.trace(m) / a
            v = max_abs(m - lam * np.eye(a))
            scalars[f"leg{leg} {label}"] = complex(lam)
            leg_worst = max(leg_worst, v)
            if v > tol and witness is None:
                witness = (leg, label)
        violations[f"leg{leg}"] = leg_worst
    passed = max(violations.values()) <= tol
    return KLReport(
        method="generic",
        passed=passed,
        violations=violations,
        witness=witness,
        generic_pass=passed,
        scalars=scalars,
    )


def is_ueb(f: UnitaryFamily, tol: float = DEFAULT_TOL) -> UEBReport:
    """``d**2`` unitaries with ``Tr(U_i^dagger U_j) = d * delta_ij``."""
    tol = check_tol(tol)
    d = f.d
    members = f.members
    all_unitary = all(classify_operator(u, tol).is_unitary for u in members)
    gram = np.array([[trace_inner(u, w) for w in members] for u in members])
    violation = max_abs(gram - d * np.eye(len(members))) if members else float("inf")
    passed = all_unitary and len(members) == d * d and violation <= tol
    return UEBReport(passed, len(members), d * d, all_unitary, violation)


def shift_clock_family(d: int) -> UnitaryFamily:
    return UnitaryFamily(d, tuple(op for _, op in weyl_basis(d)))


def pauli_family() -> UnitaryFamily:
    return UnitaryFamily(
        2,
        (
            np.eye(2),
            np.array([[0, 1], [1, 0]]),
            np.array([[0, -1j], [1j, 0]]),
            np.array([[1, 0], [0, -1]]),
        ),
    )


def ueb_to_qlis(f: UnitaryFamily, tol: float = DEFAULT_TOL) -> IsometrySquare:
    """Diagonal ``d**2 x d**2`` square with ``f``'s members on the diagonal."""
    report = is_ueb(f, tol)
    if not report.passed:
        raise NotUEBError(f"family is not a unitary error basis: {report}")
    return diagonal_from_unitaries(f.members, tol)


def qlis_to_ueb(s: IsometrySquare, tol: float = DEFAULT_TOL) -> UnitaryFamily:
    """Read a UEB off a diagonal square orthogonal to the identity square."""
    tol = check_tol(tol)
    d = s.d
    if not np.array_equal(s.block_dims, d * np.eye(s.n, dtype=int)):
        raise NotUEBError("square is not diagonal with full-dimension blocks")
    report = check_orthogonal_qlis(identity_square(s.n, d), s, tol)
    if not report.passed:
        raise NotOrthogonalError("square is not orthogonal to the identity square", report)
    return UnitaryFamily(d, tuple(s.blocks[i][i] for i in range(s.n)))


def same_family(f: UnitaryFamily, g: UnitaryFamily) -> bool:
    """Exact (bitwise) equality of two families."""
    return f.d == g.d and len(f.members) == len(g.members) and all(
        np.array_equal(x, y) for x, y in zip(f.members, g.members)
    )


def corrupt_encoder(t: SkewPPM, cell: tuple[int, int], replacement: np.ndarray) -> EncoderTensor:
    """Encoder of ``t`` with one part swapped out (for negative tests)."""
    parts = np.array(t.parts)
    parts[cell] = replacement
    return encoder_from_sppm(SkewPPM(t.n, t.d, parts))


def encoder_isometry_violation(e: EncoderTensor) -> float:
    return max_abs(dagger(e.map) @ e.map - np.eye(e.logical_dim))


def kl_agree(e: EncoderTensor, tol: float = DEFAULT_TOL) -> bool:
    return check_kl_paper(e, tol).passed == check_kl_generic(e, tol).passed

