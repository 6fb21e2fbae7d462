"""Unit tests for operator bundle export and import."""

import json

import numpy as np
import pytest

from weakloc.core.errors import BundleError
from weakloc.core.storage import StorageManager
from weakloc.frames import orthonormal_test_frame, parseval_dual
from weakloc.operators import (
    FrameContext,
    ProvenanceKind,
    custom_operator,
    decode_action,
    encode_action,
    export_operator,
    import_operator,
)
from weakloc.operators.bundle import HEADER, MAGIC


@pytest.fixture
def ortho_ctx():
    frame = orthonormal_test_frame(6)
    return FrameContext(frame, parseval_dual(frame))


@pytest.fixture
def storage(tmp_path):
    return StorageManager(tmp_path)


@pytest.mark.unit
@pytest.mark.parametrize("is_complex", [False, True])
def test_export_import(storage, ortho_ctx, is_complex):
    """Test an exported operator comes back entry for entry with its provenance."""
    rng = np.random.default_rng(3)
    action = rng.standard_normal((6, 6))
    if is_complex:
        action = action + 1j * rng.standard_normal((6, 6))
    T = custom_operator(ortho_ctx, action, "random")
    json_path, bin_path = export_operator(T, storage, "operators", "op")
    assert bin_path == storage.base_dir / "operators" / "op.bin"

    metadata = json.loads(json_path.read_text())
    assert metadata["format"] == "WLOCOP01"
    assert metadata["shape"] == [6, 6]
    assert metadata["dtype"] == ("complex128" if is_complex else "float64")
    assert metadata["binary"]["path"] == "operators/op.bin"
    assert metadata["binary"]["type"] == "operator_action"

    back = import_operator(storage, "operators", "op", ortho_ctx)
    np.testing.assert_array_equal(back.action, action)
    assert back.provenance.kind == ProvenanceKind.CUSTOM


@pytest.mark.unit
def test_binary_layout():
    """Test the header fields and the column-major entry order."""
    payload = encode_action(np.array([[1.0, 2.0], [3.0, 4.0]]))
    magic, rows, cols, code = HEADER.unpack_from(payload)
    assert (magic, rows, cols, code) == (MAGIC, 2, 2, 1)
    body = np.frombuffer(payload[HEADER.size:], dtype="<f8")
    assert body.tolist() == [1.0, 3.0, 2.0, 4.0]
    np.testing.assert_array_equal(decode_action(payload), [[1.0, 2.0], [3.0, 4.0]])


@pytest.mark.unit
def test_decode_rejects_bad_blocks():
    """Test bad magic, truncated bodies and unknown dtype codes."""
    good = encode_action(np.eye(2))
    with pytest.raises(BundleError):
        decode_action(b"NOTMAGIC" + good[8:])
    with pytest.raises(BundleError):
        decode_action(good[:-8])
    with pytest.raises(BundleError):
        decode_action(HEADER.pack(MAGIC, 1, 1, 7) + b"\x00" * 8)
    with pytest.raises(BundleError):
        decode_action(b"short")
    with pytest.raises(BundleError):
        encode_action(np.ones(3))


@pytest.mark.unit
def test_checksum_mismatch(storage, ortho_ctx):
    """Test a tampered or missing binary block is refused."""
    _, bin_path = export_operator(custom_operator(ortho_ctx, np.eye(6), "eye"), storage, "operators", "op")
    payload = bytearray(bin_path.read_bytes())
    payload[-1] ^= 0xFF
    bin_path.write_bytes(bytes(payload))
    with pytest.raises(BundleError, match="checksum"):
        import_operator(storage, "operators", "op")

    bin_path.unlink()
    with pytest.raises(BundleError, match="checksum"):
        import_operator(storage, "operators", "op")


@pytest.mark.unit
def test_dimension_mismatch(storage, ortho_ctx):
    """Test a bundle cannot be attached to a context of another dimension."""
    export_operator(custom_operator(ortho_ctx, np.eye(6), "eye"), storage, "operators", "op")
    bundle = import_operator(storage, "operators", "op")
    assert bundle.action.shape == (6, 6)
    small = orthonormal_test_frame(4)
    with pytest.raises(BundleError):
        bundle.to_operator(FrameContext(small, parseval_dual(small)))


@pytest.mark.unit
def test_malformed_or_missing_metadata(storage):
    """Test missing metadata keys and missing bundles raise BundleError."""
    storage.save_json("operators", "op.json", {"format": "WLOCOP01"})
    with pytest.raises(BundleError, match="malformed"):
        import_operator(storage, "operators", "op")
    with pytest.raises(BundleError, match="no bundle"):
        import_operator(storage, "operators", "absent")
