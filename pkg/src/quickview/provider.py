"""Embedding providers: built-in TF-IDF and the external service client.

The external protocol is newline-delimited JSON over the standard streams of
a spawned subprocess or a TCP connection::

    request   {"id": 1, "op": "embed", "texts": ["...", ...]}
    response  {"id": 1, "vectors": [[...], ...]}          # one per text
    error     {"id": 1, "error": "..."}
    handshake {"id": 0, "op": "hello"} -> {"id": 0, "dim": 384}

Responses may arrive out of order; correlation is by id. The client
serializes writes per connection, so one client instance can be shared by
parallel cluster workers.
"""

from __future__ import annotations

import itertools
import json
import re
import shlex
import socket
import subprocess
import threading
import time
from collections import deque
from typing import Sequence

from .corpus import Cluster, tokenize
from .vectorspace import ProviderConfig, SentenceVector, TfidfModel, embed, fit_tfidf

__all__ = [
    "ProviderError",
    "TfidfProvider",
    "ExternalEmbeddingClient",
    "TfidfBackend",
    "ExternalBackend",
    "open_backend",
    "cluster_units",
]

_TCP_ENDPOINT = re.compile(r"(?:tcp://)?(?P<host>[\w.\-]+):(?P<port>\d+)$")


class ProviderError(RuntimeError):
    """An embedding provider failed, timed out or broke protocol."""


def cluster_units(cluster: Cluster) -> list[list[str]]:
    """Token lists a per-cluster TF-IDF model is fitted on.

    Every body sentence is one unit, plus each non-empty anchor text as a
    single unit, so anything the pipeline embeds is in-vocabulary.
    """
    units: list[list[str]] = []
    for doc in cluster.documents:
        units.extend(list(s.tokens) for s in doc.sentences)
    for doc in cluster.documents:
        anchor = tokenize(doc.anchor_text)
        if anchor:
            units.append(anchor)
    return units


class TfidfProvider:
    """Embeds raw texts through a fitted TF-IDF model."""

    def __init__(self, model: TfidfModel) -> None:
        self.model = model

    @property
    def dim(self) -> int:
        return self.model.dim

    def embed_texts(self, texts: Sequence[str]) -> list[SentenceVector]:
        return embed(self.model, list(texts))


class ExternalEmbeddingClient:
    """Protocol client for an external embedding service.

    ``endpoint`` is either ``host:port`` (or ``tcp://host:port``) for a TCP
    server, or a shell-style command line to spawn as a subprocess speaking
    the protocol on its standard streams.
    """

    def __init__(self, endpoint: str, timeout_ms: int = 10000) -> None:
        self._timeout = timeout_ms / 1000.0
        self._ids = itertools.count(1)
        self._lock = threading.Lock()  # serializes writes and id allocation
        self._cond = threading.Condition()
        self._responses: dict[int, dict] = {}
        self._closed = False
        self._process: subprocess.Popen | None = None
        self._socket: socket.socket | None = None
        self._stderr_tail: deque[str] = deque(maxlen=20)

        match = _TCP_ENDPOINT.match(endpoint)
        if match:
            self._connect_tcp(match.group("host"), int(match.group("port")))
        else:
            self._spawn(endpoint)

        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()
        self.dim = self._handshake()

    def _connect_tcp(self, host: str, port: int) -> None:
        try:
            sock = socket.create_connection((host, port), timeout=self._timeout)
        except OSError as exc:
            raise ProviderError(f"cannot connect to {host}:{port}: {exc}") from exc
        sock.settimeout(None)
        self._socket = sock
        self._rstream = sock.makefile("r", encoding="utf-8")
        self._wstream = sock.makefile("w", encoding="utf-8")

    def _spawn(self, command: str) -> None:
        argv = shlex.split(command)
        if not argv:
            raise ProviderError("empty provider command")
        try:
            self._process = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise ProviderError(f"cannot start provider {argv[0]!r}: {exc}") from exc
        self._rstream = self._process.stdout
        self._wstream = self._process.stdin
        threading.Thread(target=self._drain_stderr, daemon=True).start()

    def _drain_stderr(self) -> None:
        assert self._process is not None and self._process.stderr is not None
        for line in self._process.stderr:
            self._stderr_tail.append(line.rstrip("\n"))

    def _read_loop(self) -> None:
        try:
            for line in self._rstream:
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    continue  # noise on the stream; requests will time out
                if not isinstance(record, dict) or "id" not in record:
                    continue
                with self._cond:
                    self._responses[record["id"]] = record
                    self._cond.notify_all()
        except (OSError, ValueError):
            pass
        finally:
            with self._cond:
                self._closed = True
                self._cond.notify_all()

    def _diagnostic(self) -> str:
        if self._stderr_tail:
            return " | provider stderr: " + " / ".join(self._stderr_tail)
        return ""

    def _request(self, record: dict) -> dict:
        request_id = record["id"]
        payload = json.dumps(record, ensure_ascii=False)
        with self._lock:
            if self._closed:
                raise ProviderError("provider connection is closed" + self._diagnostic())
            try:
                self._wstream.write(payload + "\n")
                self._wstream.flush()
            except (OSError, ValueError) as exc:
                raise ProviderError(f"provider write failed: {exc}{self._diagnostic()}") from exc

        deadline = time.monotonic() + self._timeout
        with self._cond:
            while request_id not in self._responses:
                if self._closed:
                    raise ProviderError(
                        "provider closed the connection before responding" + self._diagnostic()
                    )
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    raise ProviderError(
                        f"provider timed out after {self._timeout:.1f}s"
                        f" (request id {request_id})" + self._diagnostic()
                    )
                self._cond.wait(remaining)
            response = self._responses.pop(request_id)
        if "error" in response:
            raise ProviderError(f"provider error: {response['error']}")
        return response

    def _handshake(self) -> int:
        response = self._request({"id": 0, "op": "hello"})
        dim = response.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise ProviderError(f"handshake returned invalid dimension {dim!r}")
        return dim

    def embed_texts(self, texts: Sequence[str]) -> list[SentenceVector]:
        texts = list(texts)
        if not texts:
            return []
        with self._lock:
            request_id = next(self._ids)
        response = self._request({"id": request_id, "op": "embed", "texts": texts})
        vectors = response.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            got = len(vectors) if isinstance(vectors, list) else type(vectors).__name__
            raise ProviderError(f"expected {len(texts)} vectors, got {got}")
        out = []
        for i, values in enumerate(vectors):
            if not isinstance(values, list) or len(values) != self.dim:
                raise ProviderError(
                    f"vector {i} has dimension {len(values) if isinstance(values, list) else '?'},"
                    f" expected {self.dim}"
                )
            out.append(SentenceVector(values))
        return out

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()
        if self._socket is not None:
            try:
                self._socket.close()
            except OSError:
                pass
        if self._process is not None:
            try:
                if self._process.stdin:
                    self._process.stdin.close()
                self._process.wait(timeout=2)
            except (OSError, subprocess.TimeoutExpired):
                self._process.kill()
                self._process.wait()

    def __enter__(self) -> "ExternalEmbeddingClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class TfidfBackend:
    """Fits one TF-IDF model per cluster; providers are independent and pure."""

    def provider_for(self, cluster: Cluster) -> TfidfProvider:
        return TfidfProvider(fit_tfidf(cluster_units(cluster)))

    def close(self) -> None:
        pass

    def __enter__(self) -> "TfidfBackend":
        return self

    def __exit__(self, *exc) -> None:
        pass


class ExternalBackend:
    """One shared protocol client serves every cluster."""

    def __init__(self, client: ExternalEmbeddingClient) -> None:
        self.client = client

    def provider_for(self, cluster: Cluster) -> ExternalEmbeddingClient:
        return self.client

    def close(self) -> None:
        self.client.close()

    def __enter__(self) -> "ExternalBackend":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def open_backend(config: ProviderConfig):
    """Build the embedding backend named by the provider config."""
    if config.kind == "tfidf":
        return TfidfBackend()
    assert config.endpoint is not None
    return ExternalBackend(ExternalEmbeddingClient(config.endpoint, config.timeout_ms))
