"""Content-addressed attachment storage for ticket evidence.

Evidence must be immutable once cited: blobs are stored under their SHA-256
digest, so a second store of the same bytes is a no-op and any tampering is
detectable by re-hashing.
"""

import hashlib
from pathlib import Path


class AttachmentStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def store(self, data: bytes, filename: str = "") -> dict:
        """Persist a blob; returns the evidence entry to cite on a ticket."""
        digest = hashlib.sha256(data).hexdigest()
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / digest
        if not path.exists():
            path.write_bytes(data)
        return {"attachment": digest, "filename": filename, "size": len(data)}

    def load(self, digest: str) -> bytes:
        path = self.root / digest
        if not path.exists():
            raise KeyError(f"unknown attachment {digest!r}")
        data = path.read_bytes()
        actual = hashlib.sha256(data).hexdigest()
        if actual != digest:
            raise ValueError(f"attachment {digest} fails integrity check (got {actual})")
        return data

    def __contains__(self, digest: str) -> bool:
        return (self.root / digest).exists()
