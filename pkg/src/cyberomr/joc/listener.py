"""TCP uplink listener terminating the sensor frame stream."""

import logging
import socket
import socketserver
import threading

from ..sensor.uplink import FrameAuthError, HEADER_LEN

logger = logging.getLogger(__name__)


class UplinkListener:
    """Accepts sensor connections and feeds frames into the platform.

    Each connection gets its own sequence tracking (per-connection FIFO), so
    distinct AoR pipelines never interleave sequence numbers.
    """

    def __init__(self, platform, key: bytes, host: str = "127.0.0.1", port: int = 0):
        self.platform = platform
        self.key = key
        self._conn_counter = 0
        listener = self

        class Handler(socketserver.BaseRequestHandler):
            def handle(self):
                listener._conn_counter += 1
                connection = f"tcp-{listener._conn_counter}"
                sock: socket.socket = self.request
                buffer = b""
                while True:
                    try:
                        chunk = sock.recv(65536)
                    except OSError:
                        return
                    if not chunk:
                        return
                    buffer += chunk
                    while len(buffer) >= HEADER_LEN:
                        body_len = int.from_bytes(buffer[:HEADER_LEN], "big")
                        frame_len = HEADER_LEN + body_len
                        if len(buffer) < frame_len:
                            break
                        frame, buffer = buffer[:frame_len], buffer[frame_len:]
                        try:
                            listener.platform.ingest_frame(frame, listener.key, connection)
                        except FrameAuthError as exc:
                            logger.warning("rejected frame on %s: %s", connection, exc)

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self._server = Server((host, port), Handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address

    def start(self) -> None:
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        logger.info("uplink listener on %s:%d", *self.address)

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()


def send_frames(frames, host: str, port: int) -> int:
    """Client side: push serialized frames over one TCP connection."""
    sent = 0
    with socket.create_connection((host, port)) as sock:
        for frame in frames:
            sock.sendall(frame.to_bytes())
            sent += 1
    return sent
