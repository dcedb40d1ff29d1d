"""Binary weight files and atomic artifact writes.

Weight file layout (all integers little-endian):

    magic      4 bytes  b"WFRG"
    version    u32      currently 1
    header_len u32
    header     JSON (utf-8): {"arrays": [{name, shape, offset, length}, ...],
                              "meta": {...}}
    payload    concatenated float32 arrays, little-endian, in header order
    checksum   32 bytes, sha256 over everything above

Offsets and lengths are in float32 elements.  The checksum is verified on
load, as is the payload length implied by the header.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from pathlib import Path

import numpy as np
import torch

from .errors import IntegrityError

MAGIC = b"WFRG"
VERSION = 1


def atomic_write_bytes(path, data: bytes) -> None:
    """Write via temp file + rename so readers never see partial content."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def save_weight_file(path, arrays: dict, meta: dict | None = None) -> None:
    """Persist named float arrays (numpy or torch) to the binary format."""
    entries = []
    chunks = []
    offset = 0
    for name, value in arrays.items():
        if isinstance(value, torch.Tensor):
            value = value.detach().cpu().numpy()
        arr = np.ascontiguousarray(value, dtype=np.float32)
        entries.append(
            {
                "name": str(name),
                "shape": list(arr.shape),
                "offset": offset,
                "length": int(arr.size),
            }
        )
        chunks.append(arr.tobytes())
        offset += int(arr.size)

    header = json.dumps(
        {"arrays": entries, "meta": meta or {}}, sort_keys=True
    ).encode("utf-8")
    body = b"".join(
        [MAGIC, struct.pack("<II", VERSION, len(header)), header, *chunks]
    )
    atomic_write_bytes(path, body + hashlib.sha256(body).digest())


def load_weight_file(path) -> tuple[dict, dict]:
    """Load a weight file, verifying checksum and lengths.

    Returns (arrays, meta) where arrays maps name -> float32 ndarray.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 44 or raw[:4] != MAGIC:
        raise IntegrityError(f"{path}: not a weight file")
    body, checksum = raw[:-32], raw[-32:]
    if hashlib.sha256(body).digest() != checksum:
        raise IntegrityError(f"{path}: checksum mismatch")
    version, header_len = struct.unpack("<II", body[4:12])
    if version != VERSION:
        raise IntegrityError(f"{path}: unsupported version {version}")
    header = json.loads(body[12 : 12 + header_len].decode("utf-8"))
    payload = body[12 + header_len :]

    arrays = {}
    total = 0
    for entry in header["arrays"]:
        total += int(entry["length"])
    if len(payload) != 4 * total:
        raise IntegrityError(
            f"{path}: payload holds {len(payload) // 4} floats, header says {total}"
        )
    for entry in header["arrays"]:
        start = 4 * int(entry["offset"])
        end = start + 4 * int(entry["length"])
        arr = np.frombuffer(payload[start:end], dtype="<f4").reshape(entry["shape"])
        arrays[entry["name"]] = arr.copy()
    return arrays, header.get("meta", {})


def save_module(path, module: torch.nn.Module, meta: dict | None = None) -> None:
    save_weight_file(path, dict(module.state_dict()), meta=meta)


def load_module(path, module: torch.nn.Module) -> dict:
    """Fill `module` in place from a weight file; returns the file's meta."""
    arrays, meta = load_weight_file(path)
    state = {name: torch.from_numpy(arr) for name, arr in arrays.items()}
    module.load_state_dict(state)
    return meta


def write_table(path, header: list, rows: list) -> None:
    """Write a tab-delimited metric table with a documented header row."""
    lines = ["\t".join(str(h) for h in header)]
    for row in rows:
        lines.append("\t".join(_fmt(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_table(path) -> tuple[list, list]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split("\t")
    rows = [line.split("\t") for line in lines[1:] if line]
    return header, rows


def _fmt(value) -> str:
    if isinstance(value, float):
        if value != value:  # NaN
            return "nan"
        if value in (float("inf"), float("-inf")):
            return "inf" if value > 0 else "-inf"
        return f"{value:.8g}"
    return str(value)
