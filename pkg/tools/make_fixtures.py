"""Regenerate the bundled context files in src/gelspec/data/."""
import json
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "gelspec" / "data"

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def mat(a):
    a = np.asarray(a, dtype=complex)
    return {"dim": a.shape[0], "re": a.real.reshape(-1).tolist(), "im": a.imag.reshape(-1).tolist()}


def diag_proj(n, idx):
    d = np.zeros(n)
    d[list(idx)] = 1
    return mat(np.diag(d))


def write(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=1) + "\n")


write("m2_chain.json", {"dim": 2, "meet_close": False, "contexts": [{"label": "Cz", "basis": [[1, 0], [0, 1]]}]})
write(
    "m2_two.json",
    {
        "dim": 2,
        "meet_close": True,
        "contexts": [
            {"label": "Cz", "basis": [[1, 0], [0, 1]]},
            {"label": "Cx", "basis": [[1, 1], [1, -1]]},
        ],
    },
)
write(
    "m4_chain.json",
    {
        "dim": 4,
        "meet_close": False,
        "contexts": [
            {"label": "C12|34", "projections": [diag_proj(4, [0, 1]), diag_proj(4, [2, 3])]},
            {"label": "C1|2|34", "projections": [diag_proj(4, [0]), diag_proj(4, [1])]},
            {"label": "Cdiag", "basis": np.eye(4).tolist()},
        ],
    },
)

# Mermin-Peres square: rows and columns of mutually commuting two-qubit observables
square = [
    [np.kron(X, I2), np.kron(I2, X), np.kron(X, X)],
    [np.kron(I2, Y), np.kron(Y, I2), np.kron(Y, Y)],
    [np.kron(X, Y), np.kron(Y, X), np.kron(Z, Z)],
]
ctx = []
for i in range(3):
    ctx.append({"label": f"row{i + 1}", "observable": mat(square[i][0] + 2 * square[i][1])})
for j in range(3):
    ctx.append({"label": f"col{j + 1}", "observable": mat(square[0][j] + 2 * square[1][j])})
write("mermin_peres.json", {"dim": 4, "meet_close": True, "contexts": ctx})

# 18 vectors in 9 orthogonal bases of C^4, each vector in exactly two bases
cabello = [
    [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)],
    [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)],
    [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)],
    [(1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)],
    [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)],
    [(1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)],
    [(1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)],
    [(1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)],
    [(1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)],
]
write(
    "cabello18.json",
    {
        "dim": 4,
        "meet_close": True,
        "contexts": [{"label": f"B{k + 1}", "basis": [list(v) for v in b]} for k, b in enumerate(cabello)],
    },
)

rng = np.random.default_rng(20091)
bases = []
for k in range(10):
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    bases.append({"label": f"R{k + 1}", "basis": [q[:, i].tolist() for i in range(4)]})
write("ten_m4.json", {"dim": 4, "meet_close": False, "contexts": bases})
