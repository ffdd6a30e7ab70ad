"""File formats: JSON network and matrix documents, CSV branch lists.

All numbers are emitted with Python's shortest round-trip float
representation, so ``parse(emit(x)) == x`` holds bit-exactly and output
is byte-for-byte reproducible.  Complex values are stored as two-element
``[re, im]`` arrays; JSON's decimal point is always ``.`` regardless of
locale.
"""

from __future__ import annotations

import csv
import io as _io
import json

import numpy as np

from .errors import FileFormatError
from .network_model import Branch, Network, Shunt
from .ybus import AdmittanceMatrix


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _unpair(v, what: str) -> complex:
    if (
        not isinstance(v, (list, tuple))
        or len(v) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        raise FileFormatError(f"{what} must be a two-element [re, im] array, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def _require_int(v, what: str) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise FileFormatError(f"{what} must be an integer, got {v!r}")
    return v


# -- network documents -------------------------------------------------------

def network_to_dict(net: Network) -> dict:
    return {
        "nodes": net.node_count,
        "branches": [
            {"from": b.from_node, "to": b.to_node, "y": _pair(b.admittance)}
            for b in net.branches
        ],
        "shunts": [{"node": s.node, "y": _pair(s.admittance)} for s in net.shunts],
    }


def network_from_dict(doc) -> Network:
    if not isinstance(doc, dict):
        raise FileFormatError("network document must be a JSON object")
    unknown = set(doc) - {"nodes", "branches", "shunts"}
    if unknown:
        raise FileFormatError(f"unknown network document keys: {sorted(unknown)}")
    nodes = _require_int(doc.get("nodes"), '"nodes"')
    branches = []
    for i, b in enumerate(doc.get("branches", [])):
        if not isinstance(b, dict):
            raise FileFormatError(f"branch {i} must be an object")
        branches.append(
            Branch(
                from_node=_require_int(b.get("from"), f'branch {i} "from"'),
                to_node=_require_int(b.get("to"), f'branch {i} "to"'),
                admittance=_unpair(b.get("y"), f'branch {i} "y"'),
            )
        )
    shunts = []
    for i, s in enumerate(doc.get("shunts", [])):
        if not isinstance(s, dict):
            raise FileFormatError(f"shunt {i} must be an object")
        shunts.append(
            Shunt(
                node=_require_int(s.get("node"), f'shunt {i} "node"'),
                admittance=_unpair(s.get("y"), f'shunt {i} "y"'),
            )
        )
    return Network(node_count=nodes, branches=tuple(branches), shunts=tuple(shunts))


def network_from_csv(text: str) -> Network:
    """Parse a branch-list CSV: one ``from,to,re,im`` row per element.

    Rows with ``to = -1`` are shunts at ``from``.  Blank lines, ``#``
    comments and a literal header row are skipped.  The node count is one
    past the largest node id seen.
    """
    branches: list[Branch] = []
    shunts: list[Shunt] = []
    max_node = -1
    reader = csv.reader(_io.StringIO(text))
    for ln, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row]
        if cells[0].lower() in ("from", "from_node"):
            continue
        if len(cells) != 4:
            raise FileFormatError(f"line {ln}: expected from,to,re,im, got {len(cells)} fields")
        try:
            f, t = int(cells[0]), int(cells[1])
            y = complex(float(cells[2]), float(cells[3]))
        except ValueError as exc:
            raise FileFormatError(f"line {ln}: {exc}") from exc
        if t == -1:
            shunts.append(Shunt(node=f, admittance=y))
            max_node = max(max_node, f)
        else:
            branches.append(Branch(from_node=f, to_node=t, admittance=y))
            max_node = max(max_node, f, t)
    if max_node < 0:
        raise FileFormatError("CSV contains no rows")
    return Network(node_count=max_node + 1, branches=tuple(branches), shunts=tuple(shunts))


# -- matrix documents ---------------------------------------------------------

def matrix_to_dict(y: AdmittanceMatrix) -> dict:
    return {
        "n": y.size,
        "node_order": list(y.node_order),
        "entries": [_pair(z) for z in y.matrix.ravel()],
    }


def matrix_from_dict(doc) -> AdmittanceMatrix:
    if not isinstance(doc, dict):
        raise FileFormatError("matrix document must be a JSON object")
    unknown = set(doc) - {"n", "node_order", "entries"}
    if unknown:
        raise FileFormatError(f"unknown matrix document keys: {sorted(unknown)}")
    n = _require_int(doc.get("n"), '"n"')
    order = doc.get("node_order")
    if not isinstance(order, list) or len(order) != n:
        raise FileFormatError(f'"node_order" must list {n} node ids')
    order = [_require_int(v, '"node_order" entry') for v in order]
    entries = doc.get("entries")
    if not isinstance(entries, list) or len(entries) != n * n:
        raise FileFormatError(f'"entries" must hold exactly {n * n} [re, im] pairs')
    flat = [_unpair(e, f"entry {i}") for i, e in enumerate(entries)]
    m = np.array(flat, dtype=np.complex128).reshape(n, n) if n else np.zeros((0, 0), complex)
    return AdmittanceMatrix(matrix=m, node_order=tuple(order))


def recovery_to_dict(row_nodes, col_nodes, m: np.ndarray) -> dict:
    """Rectangular complex matrix with labeled rows and columns."""
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "row_nodes": [int(v) for v in row_nodes],
        "col_nodes": [int(v) for v in col_nodes],
        "entries": [_pair(z) for z in np.asarray(m).ravel()],
    }


# -- files --------------------------------------------------------------------

def emit_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_network(path: str) -> Network:
    """Read a network file; ``.csv`` means branch-list CSV, anything else JSON."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.lower().endswith(".csv"):
        return network_from_csv(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON: {exc}") from exc
    return network_from_dict(doc)


def save_network(path: str, net: Network) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_json(network_to_dict(net)))


def load_matrix(path: str) -> AdmittanceMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON: {exc}") from exc
    return matrix_from_dict(doc)


def save_matrix(path: str, y: AdmittanceMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_json(matrix_to_dict(y)))


def load_any(path: str):
    """Read a path as either a network or a matrix document.

    JSON objects are told apart by their keys; ``.csv`` is always a
    network.  Returns a :class:`Network` or an :class:`AdmittanceMatrix`.
    """
    if path.lower().endswith(".csv"):
        return load_network(path)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON: {exc}") from exc
    if isinstance(doc, dict) and "entries" in doc:
        return matrix_from_dict(doc)
    return network_from_dict(doc)
