"""
Portable operator bundles: JSON metadata plus a binary action block.

Binary layout (little-endian): 8-byte magic ``WLOCOP01``, uint64 rows,
uint64 cols, uint32 dtype code (1 = float64, 2 = complex128), then the
matrix entries in column-major order.
"""

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from weakloc.core.errors import BundleError
from weakloc.core.storage import StorageManager, sha256_file
from weakloc.operators.localized import FrameContext, LocalizedOperator, Provenance, ProvenanceKind

logger = logging.getLogger(__name__)

MAGIC = b"WLOCOP01"
HEADER = struct.Struct("<8sQQI")
DTYPE_CODES = {1: np.dtype("<f8"), 2: np.dtype("<c16")}


def encode_action(action: np.ndarray) -> bytes:
    A = np.asarray(action)
    if A.ndim != 2:
        raise BundleError(f"expected a matrix, got shape {A.shape}")
    code = 2 if np.iscomplexobj(A) else 1
    data = np.asfortranarray(A.astype(DTYPE_CODES[code]))
    return HEADER.pack(MAGIC, A.shape[0], A.shape[1], code) + data.tobytes(order="F")


def decode_action(payload: bytes) -> np.ndarray:
    if len(payload) < HEADER.size:
        raise BundleError("binary block shorter than its header")
    magic, rows, cols, code = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise BundleError(f"bad magic {magic!r}")
    if code not in DTYPE_CODES:
        raise BundleError(f"unknown dtype code {code}")
    dtype = DTYPE_CODES[code]
    expected = rows * cols * dtype.itemsize
    body = payload[HEADER.size:]
    if len(body) != expected:
        raise BundleError(f"{rows}x{cols} block needs {expected} bytes, found {len(body)}")
    return np.frombuffer(body, dtype=dtype).reshape((rows, cols), order="F").astype(dtype.newbyteorder("="))


@dataclass
class OperatorBundle:
    action: np.ndarray
    metadata: Dict[str, Any]

    def to_operator(self, context: FrameContext) -> LocalizedOperator:
        """Attach the imported action to a frame context of matching dimension."""
        if self.action.shape != (context.dim, context.dim):
            raise BundleError(
                f"bundle action {self.action.shape} does not fit a {context.dim}-dimensional context"
            )
        prov = dict(self.metadata.get("provenance", {}))
        kind = prov.pop("kind", ProvenanceKind.CUSTOM.value)
        try:
            kind = ProvenanceKind(kind)
        except ValueError as exc:
            raise BundleError(f"unknown provenance kind {kind!r}") from exc
        return LocalizedOperator(self.action, context, Provenance(kind, prov))


def export_operator(T: LocalizedOperator, storage: StorageManager, run: str, name: str) -> Tuple[Path, Path]:
    """
    Write ``<name>.bin`` and ``<name>.json`` under ``run`` in ``storage``.

    The metadata references the binary block by its path relative to the
    storage base and its sha256.

    Returns:
        (metadata path, binary path)
    """
    bin_path = storage.save_bytes(run, f"{name}.bin", encode_action(T.action))
    metadata = {
        "format": MAGIC.decode("ascii"),
        "binary": storage.artifact_ref(bin_path, "operator_action", label=name),
        "shape": list(T.action.shape),
        "dtype": "complex128" if np.iscomplexobj(T.action) else "float64",
        "provenance": T.provenance.to_dict(),
        "frame": T.context.describe(),
    }
    json_path = storage.save_json(run, f"{name}.json", metadata)
    logger.info("exported operator %s (%dx%d)", name, *T.action.shape)
    return json_path, bin_path


def import_operator(
    storage: StorageManager,
    run: str,
    name: str,
    context: Optional[FrameContext] = None
):
    """
    Read a bundle; with a context, return a LocalizedOperator, else the bundle.

    The binary checksum recorded in the metadata is verified.
    """
    try:
        metadata = storage.load_json(run, f"{name}.json")
        ref = metadata["binary"]
        bin_path = storage.base_dir / ref["path"]
        checksum = ref["sha256"]
    except FileNotFoundError as exc:
        raise BundleError(f"no bundle {run}/{name}: {exc}") from exc
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise BundleError(f"malformed bundle metadata for {run}/{name}: {exc}") from exc
    if not bin_path.is_file() or sha256_file(bin_path) != checksum:
        raise BundleError(f"checksum mismatch for {ref['path']}")
    bundle = OperatorBundle(decode_action(bin_path.read_bytes()), metadata)
    if list(bundle.action.shape) != list(metadata.get("shape", bundle.action.shape)):
        raise BundleError("metadata shape disagrees with the binary block")
    return bundle if context is None else bundle.to_operator(context)
