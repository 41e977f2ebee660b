"""On-disk formats: MDL1 checkpoints, diagnostics CSV and run manifests.

Checkpoint layout (little-endian)::

    b"MDL1"
    u32 n, f64 L, f64 t, u8 model tag, f64 M, f64 m, f64 Re z, f64 Im z
    then, per field in model order, the complex128 array in row-major order
    with spinor components outermost.
"""

import csv
import hashlib
import io
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fields import make_grid
from .flows import MODELS, ModelKind, SimState

MAGIC = b"MDL1"
MODEL_TAGS = {name: i for i, name in enumerate(MODELS)}


HEADER = struct.Struct("<IddBdddd")


def encode_checkpoint(state: SimState) -> bytes:
    model = state.model
    hdr = HEADER.pack(
        state.grid.n,
        state.grid.L,
        state.t,
        MODEL_TAGS[model.name],
        model.M,
        model.m,
        model.z.real,
        model.z.imag,
    )
    parts = [MAGIC, hdr]
    for name in model.field_names:
        parts.append(np.ascontiguousarray(state.fields[name], dtype="<c16").tobytes())
    return b"".join(parts)


def decode_checkpoint(blob: bytes) -> SimState:
    if blob[:4] != MAGIC:
        raise ValueError("not an MDL1 checkpoint (bad magic)")
    hs = HEADER
    n, L, t, tag, M, m, zr, zi = hs.unpack_from(blob, 4)
    if tag >= len(MODELS):
        raise ValueError(f"unknown model tag {tag}")
    model = ModelKind(MODELS[tag], M=M, m=m, z=complex(zr, zi))
    grid = make_grid(n, L)
    offset = 4 + hs.size
    fields = {}
    for name in model.field_names:
        shape = ((4,) if name in model.spinor_fields else ()) + (n, n, n)
        count = int(np.prod(shape))
        arr = np.frombuffer(blob, dtype="<c16", count=count, offset=offset)
        fields[name] = arr.astype(np.complex128).reshape(shape)
        offset += 16 * count
    if offset != len(blob):
        raise ValueError(f"checkpoint has {len(blob) - offset} trailing bytes")
    return SimState(model, grid, t, fields)


def save_checkpoint(state: SimState, path) -> Path:
    path = Path(path)
    path.write_bytes(encode_checkpoint(state))
    return path


def load_checkpoint(path) -> SimState:
    return decode_checkpoint(Path(path).read_bytes())


def format_float(x) -> str:
    return "%.17g" % x


def write_series(records, path) -> Path:
    path = Path(path)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if records:
        w.writerow(records[0].columns())
        for r in records:
            w.writerow([format_float(v) for v in r.values()])
    path.write_text(buf.getvalue())
    return path


def read_series(path) -> dict:
    """Read a diagnostics CSV into ``{column: float array}``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty series file")
    header, body = rows[0], rows[1:]
    try:
        data = np.array([[float(v) for v in row] for row in body], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: malformed series: {exc}") from None
    if data.size and data.shape[1] != len(header):
        raise ValueError(f"{path}: rows do not match the header")
    data = data.reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    config_hash: str
    code_version: str
    start_walltime: float
    end_walltime: float
    outcome: str
    blowup_t: float | None = None
    files: list = field(default_factory=list)

    def add_file(self, path, root):
        path = Path(path)
        self.files.append(
            {
                "path": str(path.relative_to(root)),
                "bytes": path.stat().st_size,
                "sha256": sha256_file(path),
            }
        )

    def write(self, path):
        Path(path).write_text(json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n")


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())
