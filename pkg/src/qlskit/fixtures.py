"""
The worked examples, encoded entry by entry from their typeset form.

Each fixture is first built as a JSON document whose scalars are symbolic
strings (``"1/sqrt2"``, ``"w*/sqrt3"``), then parsed through the same loader
used for files, so constructors and the shipped ``data/*.json`` files yield
bit-identical arrays.

Fixture ids: ``qls4``, ``u9``, ``oqls9_left``, ``oqls9_right``, ``qlis8_q``,
``qlis8_k``, ``sppm8_t``.

The dimension-8 isometry squares are transcribed verbatim, signs and term
order included. As printed, ``qlis8_q`` composed with ``qlis8_k`` differs
from ``sppm8_t`` in cell ``(0, 1)``; see :func:`qlis8_q_cell01_variant`.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from . import formats

DATA_DIR = Path(__file__).parent / "data"

FIXTURE_IDS = ("qls4", "u9", "oqls9_left", "oqls9_right", "qlis8_q", "qlis8_k", "sppm8_t")


def _vec(n: int, terms: dict[int, str]) -> list[str]:
    return [terms.get(k, "0") for k in range(n)]


# dimension-4 square: each entry is {basis index: coefficient}
_QLS4 = [
    [{0: "1"}, {1: "1"}, {2: "1"}, {3: "1"}],
    [
        {1: "1/sqrt2", 2: "-1/sqrt2"},
        {0: "i/sqrt5", 3: "2/sqrt5"},
        {0: "2/sqrt5", 3: "i/sqrt5"},
        {1: "1/sqrt2", 2: "1/sqrt2"},
    ],
    [
        {1: "1/sqrt2", 2: "1/sqrt2"},
        {0: "2/sqrt5", 3: "i/sqrt5"},
        {0: "i/sqrt5", 3: "2/sqrt5"},
        {1: "1/sqrt2", 2: "-1/sqrt2"},
    ],
    [{3: "1"}, {2: "1"}, {1: "1"}, {0: "1"}],
]

# 9x9 unitary, global 1/sqrt3 folded into each nonzero entry
_U9 = {
    (0, 0): "1/sqrt3", (0, 1): "1/sqrt3", (0, 2): "1/sqrt3",
    (1, 0): "1/sqrt3", (1, 1): "w/sqrt3", (1, 2): "w*/sqrt3",
    (2, 0): "1/sqrt3", (2, 1): "w*/sqrt3", (2, 2): "w/sqrt3",
    (3, 3): "(1+i)/sqrt3", (3, 4): "(1-i)/sqrt2/sqrt3",
    (4, 3): "-i/sqrt2/sqrt3", (4, 4): "1/sqrt3", (4, 5): "(1/sqrt2+i)/sqrt3",
    (5, 3): "1/sqrt2/sqrt3", (5, 4): "i/sqrt3", (5, 5): "(1-i/sqrt2)/sqrt3",
    (6, 6): "sqrt(3/2)/sqrt3", (6, 7): "sqrt(3/2)/sqrt3",
    (7, 6): "sqrt(3/2)/sqrt3", (7, 7): "-sqrt(3/2)/sqrt3",
    (8, 8): "sqrt3/sqrt3",
}  # fmt: skip

# "k" is the basis ket |k>, "Uk" is U|k>
_OQLS9_LEFT = """
0  2  1  3 5 4 6  8  7
2  1  0  5 4 3 8  7  6
1  0  2  4 3 5 7  6  8
6  8  7  0 2 1 3  5  4
8  7  6  2 1 0 5  4  3
7  6  8  1 0 2 4  3  5
U3 U5 U4 6 8 7 U0 U2 U1
U5 U4 U3 8 7 6 U2 U1 U0
U4 U3 U5 7 6 8 U1 U0 U2
"""

_OQLS9_RIGHT = """
0  2  1  3 5 4 6  8  7
1  0  2  4 3 5 7  6  8
2  1  0  5 4 3 8  7  6
3  5  4  6 8 7 U0 U2 U1
4  3  5  7 6 8 U1 U0 U2
5  4  3  8 7 6 U2 U1 U0
U6 U8 U7 0 2 1 3  5  4
U7 U6 U8 1 0 2 4  3  5
U8 U7 U6 2 1 0 5  4  3
"""

# dimension-8 isometry squares: cell -> [(sign, ket, bra)], bra in "ab"
_QLIS8_Q = {
    (0, 0): [(1, 0, "a"), (1, 1, "b")],
    (0, 1): [(1, 2, "a"), (1, 3, "b")],
    (1, 0): [(1, 2, "a"), (1, 3, "b")],
    (1, 1): [(1, 1, "a"), (1, 0, "b")],
    (2, 2): [(1, 0, "a"), (-1, 1, "b")],
    (2, 3): [(1, 3, "b"), (-1, 2, "a")],
    (3, 2): [(1, 2, "a"), (-1, 3, "b")],
    (3, 3): [(1, 0, "a"), (-1, 1, "b")],
    (4, 4): [(1, 1, "a"), (1, 2, "b")],
    (4, 5): [(1, 0, "a"), (1, 3, "b")],
    (5, 4): [(1, 3, "b"), (-1, 0, "a")],
    (5, 5): [(1, 2, "b"), (-1, 1, "a")],
    (6, 6): [(1, 0, "a"), (1, 2, "b")],
    (6, 7): [(1, 3, "b"), (-1, 1, "a")],
    (7, 6): [(1, 1, "a"), (1, 3, "b")],
    (7, 7): [(1, 2, "b"), (-1, 0, "a")],
}

_QLIS8_K = {
    (0, 0): [(1, 0, "a"), (1, 1, "b")],
    (0, 1): [(1, 2, "a"), (1, 3, "b")],
    (1, 0): [(1, 2, "a"), (1, 3, "b")],
    (1, 1): [(1, 0, "a"), (1, 1, "b")],
    (2, 2): [(1, 0, "a"), (1, 1, "b")],
    (2, 3): [(1, 3, "a"), (1, 2, "b")],
    (3, 2): [(1, 2, "a"), (1, 3, "b")],
    (3, 3): [(1, 1, "a"), (1, 0, "b")],
    (4, 4): [(1, 2, "a"), (1, 1, "b")],
    (4, 5): [(1, 3, "a"), (1, 0, "b")],
    (5, 4): [(1, 3, "a"), (1, 0, "b")],
    (5, 5): [(1, 2, "a"), (1, 1, "b")],
    (6, 6): [(1, 2, "a"), (1, 0, "b")],
    (6, 7): [(1, 3, "a"), (1, 1, "b")],
    (7, 6): [(1, 3, "a"), (1, 1, "b")],
    (7, 7): [(1, 2, "a"), (1, 0, "b")],
}

# skew PPM: cell -> [(sign, ket, bra)] over |0>..|3>
_SPPM8_T = {
    (0, 0): [(1, 0, 0), (1, 1, 1)],
    (0, 1): [(1, 3, 2), (1, 2, 3)],
    (1, 0): [(1, 2, 2), (1, 3, 3)],
    (1, 1): [(1, 1, 0), (1, 0, 1)],
    (2, 2): [(1, 0, 0), (-1, 1, 1)],
    (2, 3): [(1, 3, 2), (-1, 2, 3)],
    (3, 2): [(1, 2, 2), (-1, 3, 3)],
    (3, 3): [(1, 0, 1), (-1, 1, 0)],
    (4, 4): [(1, 2, 1), (1, 1, 2)],
    (4, 5): [(1, 3, 0), (1, 0, 3)],
    (5, 4): [(1, 3, 0), (-1, 0, 3)],
    (5, 5): [(1, 2, 1), (-1, 1, 2)],
    (6, 6): [(1, 2, 0), (1, 0, 2)],
    (6, 7): [(1, 3, 1), (-1, 1, 3)],
    (7, 6): [(1, 3, 1), (1, 1, 3)],
    (7, 7): [(1, 2, 0), (-1, 0, 2)],
}


def _terms_matrix(rows: int, cols: int, terms, col_index) -> list[list[str]]:
    m = [["0"] * cols for _ in range(rows)]
    for sign, r, c in terms:
        m[r][col_index(c)] = "1" if sign > 0 else "-1"
    return m


def _u9_doc() -> dict:
    return {
        "type": "matrix",
        "rows": 9,
        "cols": 9,
        "matrix": [[_U9.get((r, c), "0") for c in range(9)] for r in range(9)],
    }


def _oqls9_doc(table: str) -> dict:
    cells = [line.split() for line in table.strip().splitlines()]
    entries = []
    for row in cells:
        out = []
        for tok in row:
            if tok.startswith("U"):
                k = int(tok[1:])
                out.append([_U9.get((r, k), "0") for r in range(9)])
            else:
                out.append(_vec(9, {int(tok): "1"}))
        entries.append(out)
    return {"type": "qls", "n": 9, "entries": entries}


def _qlis8_doc(cells: dict) -> dict:
    blocks = [
        [
            _terms_matrix(4, 2, cells[(i, j)], "ab".index) if (i, j) in cells else None
            for j in range(8)
        ]
        for i in range(8)
    ]
    dims = [[2 if (i, j) in cells else 0 for j in range(8)] for i in range(8)]
    return {"type": "qlis", "n": 8, "d": 4, "block_dims": dims, "blocks": blocks}


def _sppm8_doc(cells: dict) -> dict:
    parts = [
        [_terms_matrix(4, 4, cells.get((i, j), []), int) for j in range(8)] for i in range(8)
    ]
    return {"type": "sppm", "n": 8, "d": 4, "parts": parts}


def fixture_doc(fixture_id: str) -> dict:
    """The JSON document (symbolic scalars) for ``fixture_id``."""
    builders = {
        "qls4": lambda: {
            "type": "qls",
            "n": 4,
            "entries": [[_vec(4, e) for e in row] for row in _QLS4],
        },
        "u9": _u9_doc,
        "oqls9_left": lambda: _oqls9_doc(_OQLS9_LEFT),
        "oqls9_right": lambda: _oqls9_doc(_OQLS9_RIGHT),
        "qlis8_q": lambda: _qlis8_doc(_QLIS8_Q),
        "qlis8_k": lambda: _qlis8_doc(_QLIS8_K),
        "sppm8_t": lambda: _sppm8_doc(_SPPM8_T),
    }
    if fixture_id not in builders:
        raise KeyError(f"unknown fixture {fixture_id!r}; known: {FIXTURE_IDS}")
    return builders[fixture_id]()


@lru_cache(maxsize=None)
def load_fixture(fixture_id: str):
    return formats.from_doc(fixture_doc(fixture_id))[1]


def example_qls_dim4():
    return load_fixture("qls4")


def example_unitary_u():
    return load_fixture("u9").copy()


def example_orthogonal_pair_dim9():
    return load_fixture("oqls9_left"), load_fixture("oqls9_right")


def example_qlis_pair_dim8():
    """``(Q, K, T)`` as printed."""
    return load_fixture("qlis8_q"), load_fixture("qlis8_k"), load_fixture("sppm8_t")


def qlis8_q_cell01_variant():
    """
    ``Q`` with block ``(0, 1)`` replaced by ``|3><a| + |2><b|``.

    This single change makes ``Q`` composed with ``K`` reproduce every part of
    the printed ``T``; the printed ``Q`` gives ``|2><2| + |3><3|`` at
    ``(0, 1)``, duplicating part ``(1, 0)``. Not a shipped fixture.
    """
    cells = dict(_QLIS8_Q)
    cells[(0, 1)] = [(1, 3, "a"), (1, 2, "b")]
    return formats.from_doc(_qlis8_doc(cells))[1]


def write_fixture_files(out_dir=DATA_DIR) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for fid in FIXTURE_IDS:
        path = out_dir / f"{fid}.json"
        formats.save(fixture_doc(fid), path)
        paths.append(path)
    return paths


def fixture_path(fixture_id: str) -> Path:
    return DATA_DIR / f"{fixture_id}.json"
