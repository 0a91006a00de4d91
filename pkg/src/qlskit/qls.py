"""
Quantum Latin squares.

A quantum Latin square of dimension ``n`` is stored as a complex array of
shape ``(n, n, n)``: ``entries[i, j]`` is the unit vector in row ``i``,
column ``j``. Everything here is a pure function of its inputs.

Orthogonality of a pair can be decided four ways, all of which must agree:

``basis``
    the ``n**2`` vectors ``a_ij (x) b_ij`` have identity Gram matrix;
``projector_sum``
    the rank-one projectors onto those vectors sum to the identity;
``gram``
    the Hadamard product of the two ``n**2 x n**2`` entry Gram matrices is
    the identity;
``grmz``
    the three two-party reductions of the tripartite partial-trace condition
    are all the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .numlin import (
    DEFAULT_TOL,
    DimensionError,
    ValidationReport,
    check_tol,
    dagger,
    is_unitary,
    max_abs,
    partial_trace,
    random_phases,
    random_unitary,
    reduced_state,
)

METHODS = ("basis", "projector_sum", "gram", "grmz")
FAMILY_MODES = ("pairwise", "grmz")


@dataclass(frozen=True, eq=False)
class QuantumLatinSquare:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128)
        if arr.ndim == 4 and arr.shape[-1] == 1:
            arr = arr[..., 0]
        if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
            raise DimensionError(
                f"QLS entries must form an n x n array of n-vectors, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("QLS has non-finite entries")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, i: int, j: int) -> np.ndarray:
        """Entry ``(i, j)`` as an ``(n, 1)`` column."""
        return self.entries[i, j].reshape(-1, 1)

    def vectors(self) -> np.ndarray:
        """``n x n**2`` matrix whose column ``i*n + j`` is entry ``(i, j)``."""
        n = self.n
        return self.entries.reshape(n * n, n).T

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]]) -> "QuantumLatinSquare":
        """Classical square from an integer table of symbols ``0..n-1``."""
        table = np.asarray(table, dtype=int)
        n = table.shape[0]
        if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
            raise DimensionError(f"bad Latin square table of shape {table.shape}")
        return cls(np.eye(n, dtype=np.complex128)[table])


@dataclass(frozen=True, eq=False)
class EquivalenceTransform:
    """``(i, j) -> phases[i, j] * unitary @ q[row_perm[i], col_perm[j]]``."""

    unitary: np.ndarray
    phases: np.ndarray | None = None
    row_perm: Sequence[int] | None = None
    col_perm: Sequence[int] | None = None

    def resolved(self, n: int, tol: float = DEFAULT_TOL):
        u = np.asarray(self.unitary, dtype=np.complex128)
        if u.shape != (n, n):
            raise DimensionError(f"unitary of shape {u.shape} does not act on C^{n}")
        if not is_unitary(u, tol):
            raise ValueError("equivalence transform unitary is not unitary")
        phases = np.ones((n, n), dtype=np.complex128) if self.phases is None else np.asarray(
            self.phases, dtype=np.complex128
        )
        if phases.shape != (n, n):
            raise DimensionError(f"phases must be {n}x{n}, got {phases.shape}")
        if max_abs(np.abs(phases) - 1.0) > tol:
            raise ValueError("equivalence phases must have modulus 1")
        perms = []
        for perm in (self.row_perm, self.col_perm):
            perm = list(range(n)) if perm is None else [int(x) for x in perm]
            if sorted(perm) != list(range(n)):
                raise ValueError(f"{perm} is not a permutation of range({n})")
            perms.append(perm)
        return u, phases, perms[0], perms[1]


@dataclass(frozen=True)
class OrthogonalityReport:
    method: str
    passed: bool
    max_violation: float
    witness: tuple[int, int, int, int] | None = None
    details: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class FamilyReport:
    mode: str
    passed: bool
    max_violation: float
    worst: tuple | None
    violations: dict[tuple, float]


@dataclass(frozen=True)
class Witness:
    i: int
    j: int
    p: int
    q: int
    value: float

    def as_tuple(self):
        return (self.i, self.j, self.p, self.q, self.value)


def validate_qls(q: QuantumLatinSquare, tol: float = DEFAULT_TOL) -> ValidationReport:
    """
    Check that every row and column of ``q`` is an orthonormal basis.

    One violation is recorded per row (``"row i"``) and per column
    (``"col j"``): the max-modulus deviation of that line's Gram matrix from
    the identity.
    """
    tol = check_tol(tol)
    e = q.entries
    n = q.n
    eye = np.eye(n)
    violations = {}
    for i in range(n):
        line = e[i]  # rows of `line` are the vectors
        violations[f"row {i}"] = max_abs(np.conj(line) @ line.T - eye)
    for j in range(n):
        line = e[:, j]
        violations[f"col {j}"] = max_abs(np.conj(line) @ line.T - eye)
    return ValidationReport.from_violations(violations, tol)


def is_classical(q: QuantumLatinSquare, tol: float = DEFAULT_TOL) -> bool:
    """True iff every entry is a computational basis vector up to a phase."""
    tol = check_tol(tol)
    mods = np.abs(q.entries)
    peak = mods.argmax(axis=-1)
    target = np.eye(q.n)[peak]
    return max_abs(mods - target) <= tol


def conjugate(q: QuantumLatinSquare) -> QuantumLatinSquare:
    return QuantumLatinSquare(np.conj(q.entries))


def apply_equivalence(
    q: QuantumLatinSquare, t: EquivalenceTransform, tol: float = DEFAULT_TOL
) -> QuantumLatinSquare:
    u, phases, rows, cols = t.resolved(q.n, tol)
    moved = q.entries[np.ix_(rows, cols)]
    out = np.einsum("ab,ijb->ija", u, moved) * phases[..., None]
    return QuantumLatinSquare(out)


def random_equivalence(
    n: int,
    rng: np.random.Generator,
    row_perm: Sequence[int] | None = None,
    col_perm: Sequence[int] | None = None,
) -> EquivalenceTransform:
    """Haar unitary, uniform phases, and the given (or fresh random) permutations."""
    return EquivalenceTransform(
        unitary=random_unitary(n, rng),
        phases=random_phases((n, n), rng),
        row_perm=list(rng.permutation(n)) if row_perm is None else list(row_perm),
        col_perm=list(rng.permutation(n)) if col_perm is None else list(col_perm),
    )


def _check_pair(a: QuantumLatinSquare, b: QuantumLatinSquare):
    if a.n != b.n:
        raise DimensionError(f"squares have different sizes {a.n} and {b.n}")


def product_vectors(a: QuantumLatinSquare, b: QuantumLatinSquare) -> np.ndarray:
    """``n**2 x n**2`` matrix with column ``i*n + j`` equal to ``a_ij (x) b_ij``."""
    _check_pair(a, b)
    n = a.n
    cols = [np.kron(a.entries[i, j], b.entries[i, j]) for i in range(n) for j in range(n)]
    return np.stack(cols, axis=1)


def pair_gram(a: QuantumLatinSquare, b: QuantumLatinSquare) -> np.ndarray:
    """``G[(ij),(pq)] = <a_ij|a_pq> <b_ij|b_pq>`` from the two entry Gram matrices."""
    _check_pair(a, b)
    va, vb = a.vectors(), b.vectors()
    return (dagger(va) @ va) * (dagger(vb) @ vb)


def _gram_witness(dev: np.ndarray, n: int) -> tuple[int, int, int, int]:
    r, c = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return (int(r // n), int(r % n), int(c // n), int(c % n))


def grmz_conditions(a: QuantumLatinSquare, b: QuantumLatinSquare) -> dict[str, float]:
    """
    Violations of the three tripartite partial-trace conditions.

    The operator is ``sum_{i,j,p} |a_ij><a_pj| (x) |b_ij><b_pj| (x) |i><p|`` on
    factors ``A (x) B (x) C``; key ``"X"`` holds ``max|Tr_X(...) - I|``. The
    ``A`` and ``B`` conditions hold for any pair of valid squares; ``C`` is
    the real orthogonality test.
    """
    _check_pair(a, b)
    n = a.n
    op = np.zeros((n**3, n**3), dtype=np.complex128)
    eye = np.eye(n)
    for j in range(n):
        v = sum(
            np.kron(np.kron(a.entries[i, j], b.entries[i, j]), eye[i]) for i in range(n)
        )
        op += np.outer(v, np.conj(v))
    ident = np.eye(n * n)
    out = {}
    for label, keep in (("A", (1, 2)), ("B", (0, 2)), ("C", (0, 1))):
        out[label] = max_abs(partial_trace(op, [n, n, n], keep) - ident)
    return out


def check_orthogonal(
    a: QuantumLatinSquare,
    b: QuantumLatinSquare,
    method: str = "gram",
    tol: float = DEFAULT_TOL,
) -> OrthogonalityReport:
    tol = check_tol(tol)
    _check_pair(a, b)
    n = a.n
    ident = np.eye(n * n)
    witness = None
    details: dict[str, float] = {}
    if method == "basis":
        v = product_vectors(a, b)
        dev = np.abs(dagger(v) @ v - ident)
        violation = float(dev.max())
        witness = _gram_witness(dev, n)
    elif method == "projector_sum":
        total = np.zeros((n * n, n * n), dtype=np.complex128)
        for i in range(n):
            for j in range(n):
                pa = np.outer(a.entries[i, j], np.conj(a.entries[i, j]))
                pb = np.outer(b.entries[i, j], np.conj(b.entries[i, j]))
                total += np.kron(pa, pb)
        violation = max_abs(total - ident)
    elif method == "gram":
        dev = np.abs(pair_gram(a, b) - ident)
        violation = float(dev.max())
        witness = _gram_witness(dev, n)
    elif method == "grmz":
        details = grmz_conditions(a, b)
        violation = max(details.values())
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    passed = violation <= tol
    return OrthogonalityReport(
        method=method,
        passed=passed,
        max_violation=violation,
        witness=None if passed else witness,
        details=details,
    )


def family_state(family: Sequence[QuantumLatinSquare]) -> np.ndarray:
    """``sum_ij Phi^0_ij (x) ... (x) Phi^{m-1}_ij (x) |i> (x) |j>`` as a flat vector."""
    n = family[0].n
    eye = np.eye(n)
    psi = np.zeros(n ** (len(family) + 2), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            v = np.ones(1, dtype=np.complex128)
            for sq in family:
                v = np.kron(v, sq.entries[i, j])
            psi += np.kron(np.kron(v, eye[i]), eye[j])
    return psi


def family_labels(m: int) -> list[str]:
    return [f"A{k}" for k in range(m)] + ["alpha", "beta"]


def check_mutually_orthogonal(
    family: Sequence[QuantumLatinSquare],
    mode: str = "pairwise",
    tol: float = DEFAULT_TOL,
) -> FamilyReport:
    """
    Decide mutual orthogonality of a family of ``m >= 2`` squares.

    ``pairwise`` checks every pair; ``grmz`` traces out each ``m``-element
    subset of the ``m + 2`` subsystems of :func:`family_state` and keys each
    violation by the pair of labels left over.
    """
    tol = check_tol(tol)
    family = list(family)
    if len(family) < 2:
        raise ValueError("a family needs at least two squares")
    n = family[0].n
    if any(sq.n != n for sq in family):
        raise DimensionError("family members have different sizes")
    m = len(family)
    violations: dict[tuple, float] = {}
    if mode == "pairwise":
        for g, h in itertools.combinations(range(m), 2):
            violations[(g, h)] = check_orthogonal(family[g], family[h], "gram", tol).max_violation
    elif mode == "grmz":
        psi = family_state(family)
        labels = family_labels(m)
        dims = [n] * (m + 2)
        ident = np.eye(n * n)
        for g, h in itertools.combinations(range(m + 2), 2):
            rho = reduced_state(psi, dims, (g, h))
            violations[(labels[g], labels[h])] = max_abs(rho - ident)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {FAMILY_MODES}")
    worst_key = max(violations, key=lambda k: violations[k])
    worst = violations[worst_key]
    return FamilyReport(
        mode=mode,
        passed=worst <= tol,
        max_violation=worst,
        worst=worst_key if worst > tol else None,
        violations=violations,
    )


def canonicalize_first_row(q: QuantumLatinSquare):
    """
    Rotate ``q`` so its first row is the ordered computational basis.

    Returns ``(q2, w)`` with ``w = sum_i |i><q_0i|``. The first row of ``q2``
    is set to the exact basis vectors; the rest carries ``w`` applied
    entrywise.
    """
    w = dagger(q.entries[0].T)
    out = np.einsum("ab,ijb->ija", w, q.entries)
    out[0] = np.eye(q.n)
    return QuantumLatinSquare(out), w


def classicality_obstruction(
    q: QuantumLatinSquare, tol: float = DEFAULT_TOL
) -> Witness | None:
    """
    Find entries whose overlap modulus is neither 0 nor 1.

    Any square equivalent to a classical one under a unitary and entrywise
    phases has all overlaps ``|<q_ij|q_pq>|`` in ``{0, 1}``. The returned
    witness is the largest such modulus strictly inside ``(tol, 1 - tol)``,
    lexicographically first among ties. ``None`` means inconclusive, not
    classical.
    """
    tol = check_tol(tol)
    n = q.n
    v = q.vectors()
    mods = np.abs(dagger(v) @ v)
    upper = np.triu(np.ones_like(mods, dtype=bool), k=1)
    candidate = upper & (mods > tol) & (mods < 1.0 - tol)
    if not candidate.any():
        return None
    best = mods[candidate].max()
    hits = np.flatnonzero((candidate & (mods >= best - tol)).ravel())
    r, c = np.unravel_index(int(hits[0]), mods.shape)
    return Witness(int(r // n), int(r % n), int(c // n), int(c % n), float(mods[r, c]))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def generate_cyclic_mols(p: int, count: int) -> list[QuantumLatinSquare]:
    """Squares ``L_k[i, j] = |(k*i + j) mod p>`` for ``k = 1..count``."""
    if not isinstance(p, (int, np.integer)) or not _is_prime(int(p)):
        raise ValueError(f"p must be prime, got {p!r}")
    if not 1 <= count <= p - 1:
        raise ValueError(f"count must be in [1, {p - 1}] for p={p}, got {count}")
    idx = np.arange(p)
    return [
        QuantumLatinSquare.from_table((k * idx[:, None] + idx[None, :]) % p)
        for k in range(1, count + 1)
    ]


def block_qls(s: int, t: int, rotations: np.ndarray) -> QuantumLatinSquare:
    """
    Non-classical square of dimension ``s*t`` built blockwise.

    Row ``i = r*t + x`` and column ``j = c*t + y`` get the vector
    ``rotations[r, c] |B*t + (x + y) mod t>`` with block symbol
    ``B = (r + c) mod s``; ``rotations[r, c]`` is a ``t x t`` unitary acting on
    the span of block ``B``. Lines stay orthonormal because distinct blocks
    in a line use orthogonal subspaces.
    """
    n = s * t
    rotations = np.asarray(rotations, dtype=np.complex128)
    if rotations.shape != (s, s, t, t):
        raise DimensionError(f"rotations must have shape {(s, s, t, t)}, got {rotations.shape}")
    out = np.zeros((n, n, n), dtype=np.complex128)
    for r, c, x, y in itertools.product(range(s), range(s), range(t), range(t)):
        block = (r + c) % s
        out[r * t + x, c * t + y, block * t : (block + 1) * t] = rotations[r, c][:, (x + y) % t]
    return QuantumLatinSquare(out)


def random_block_qls(s: int, t: int, rng: np.random.Generator) -> QuantumLatinSquare:
    rot = np.stack([np.stack([random_unitary(t, rng) for _ in range(s)]) for _ in range(s)])
    return block_qls(s, t, rot)
