"""Bit-exact binary snapshots of condensate states and basis sets.

Container layout (documented here and in the README):

    bytes 0..9    magic b"BDGZSNAP1\\n"
    bytes 10..17  little-endian uint64: byte length of the JSON header
    header        UTF-8 JSON: {"version": 1, "kind": ..., "meta": {...},
                   "arrays": [{"name", "dtype", "shape"}, ...]}
    payload       the listed arrays, raw little-endian bytes, in order

Arrays are stored as "<f8" or "<c16" exactly as held in memory, and JSON
floats round-trip exactly through repr, so a reload is bit-identical. No
timestamps or environment data are written: rerunning the same
configuration produces byte-identical files.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .basis import BasisSet
from .errors import ConfigurationError
from .gp import CondensateState, PhysicalParams
from .grid import Grid, TrapPotential

MAGIC = b"BDGZSNAP1\n"
VERSION = 1
_DTYPES = {"<f8": np.dtype("<f8"), "<c16": np.dtype("<c16")}


def _pack(kind: str, meta: dict, arrays: dict) -> bytes:
    descriptors = []
    blobs = []
    for name, arr in arrays.items():
        arr = np.ascontiguousarray(arr)
        dtype = "<c16" if np.iscomplexobj(arr) else "<f8"
        arr = arr.astype(_DTYPES[dtype], copy=False)
        descriptors.append({"name": name, "dtype": dtype, "shape": list(arr.shape)})
        blobs.append(arr.tobytes())
    header = json.dumps(
        {"version": VERSION, "kind": kind, "meta": meta, "arrays": descriptors},
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    return MAGIC + struct.pack("<Q", len(header)) + header + b"".join(blobs)


def _unpack(blob: bytes):
    if blob[: len(MAGIC)] != MAGIC:
        raise ConfigurationError("not a snapshot file (bad magic)")
    (header_len,) = struct.unpack("<Q", blob[len(MAGIC) : len(MAGIC) + 8])
    start = len(MAGIC) + 8
    header = json.loads(blob[start : start + header_len].decode("utf-8"))
    if header.get("version") != VERSION:
        raise ConfigurationError(f"unsupported snapshot version {header.get('version')}")
    arrays = {}
    offset = start + header_len
    for desc in header["arrays"]:
        dtype = _DTYPES[desc["dtype"]]
        count = int(np.prod(desc["shape"])) if desc["shape"] else 1
        nbytes = count * dtype.itemsize
        arrays[desc["name"]] = np.frombuffer(
            blob[offset : offset + nbytes], dtype=dtype
        ).reshape(desc["shape"]).copy()
        offset += nbytes
    return header["kind"], header["meta"], arrays


def _grid_meta(grid: Grid) -> dict:
    return {
        "points": list(grid.points_per_axis),
        "lengths": list(grid.box_lengths),
        "boundary": grid.boundary,
    }


def _grid_from_meta(meta: dict) -> Grid:
    return Grid(
        points_per_axis=tuple(meta["points"]),
        box_lengths=tuple(meta["lengths"]),
        boundary=meta["boundary"],
    )


def _trap_meta(trap: TrapPotential, arrays: dict) -> dict:
    meta = {"kind": trap.kind}
    if trap.kind == "harmonic":
        meta["frequencies"] = list(trap.frequencies)
    elif trap.kind == "tabulated":
        arrays["trap_table"] = trap.table
    return meta


def _trap_from_meta(meta: dict, arrays: dict) -> TrapPotential:
    kind = meta["kind"]
    if kind == "zero":
        return TrapPotential.zero()
    if kind == "harmonic":
        return TrapPotential.harmonic(*meta["frequencies"])
    if kind == "tabulated":
        return TrapPotential.tabulated(arrays["trap_table"])
    raise ConfigurationError(f"unknown trap kind {kind!r} in snapshot")


def save_state(state: CondensateState, path) -> None:
    arrays = {"phi0": state.phi0}
    meta = {
        "grid": _grid_meta(state.grid),
        "trap": _trap_meta(state.params.trap, arrays),
        "g": state.params.g,
        "n0": state.params.n0,
        "mu0": state.mu0,
        "residual": state.residual,
        "scheme": state.scheme,
        "iterations": state.iterations,
    }
    with open(path, "wb") as fh:
        fh.write(_pack("condensate_state", meta, arrays))


def load_state(path) -> CondensateState:
    with open(path, "rb") as fh:
        kind, meta, arrays = _unpack(fh.read())
    if kind != "condensate_state":
        raise ConfigurationError(f"snapshot holds {kind!r}, expected a condensate state")
    grid = _grid_from_meta(meta["grid"])
    params = PhysicalParams(
        g=meta["g"], n0=meta["n0"], trap=_trap_from_meta(meta["trap"], arrays)
    )
    return CondensateState(
        phi0=arrays["phi0"],
        mu0=meta["mu0"],
        params=params,
        grid=grid,
        residual=meta["residual"],
        scheme=meta["scheme"],
        iterations=meta["iterations"],
    )


def save_basis(basis: BasisSet, path) -> None:
    arrays = {"mu": basis.mu, "functions": basis.functions}
    meta = {"f": basis.f, "grid": _grid_meta(basis.grid)}
    if basis.wavevectors is not None:
        arrays["wavevectors"] = basis.wavevectors
        meta["has_wavevectors"] = True
    with open(path, "wb") as fh:
        fh.write(_pack("basis_set", meta, arrays))


def load_basis(path) -> BasisSet:
    with open(path, "rb") as fh:
        kind, meta, arrays = _unpack(fh.read())
    if kind != "basis_set":
        raise ConfigurationError(f"snapshot holds {kind!r}, expected a basis set")
    return BasisSet(
        f=meta["f"],
        mu=arrays["mu"],
        functions=arrays["functions"],
        grid=_grid_from_meta(meta["grid"]),
        wavevectors=arrays.get("wavevectors"),
    )
