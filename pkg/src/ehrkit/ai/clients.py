"""Pluggable model client interfaces plus the deterministic test doubles.

The generation and classification models are deployment details behind these
two contracts. The deterministic mock generator digests its full input so
golden-file tests are stable without any model; the stub classifier decides
from mean pixel intensity and reports the reference confidence for each
class.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field

import numpy as np

from ..errors import UpstreamError

Message = dict  # {"role": "system" | "user" | "assistant", "content": str}

XRAY_LABELS = ("Pneumonia", "Normal")


class GeneratorClient:
    def generate(self, system_role: str, messages: list[Message]) -> str:
        raise NotImplementedError


class ClassifierClient:
    def classify(self, image: np.ndarray) -> dict:
        """image: 224x224 float array in [0, 1]. Returns {label, confidence}."""
        raise NotImplementedError


class DeterministicGenerator(GeneratorClient):
    """Canonical transform of the prompt: echoes the section headers found in
    the last user message and a short digest of the whole exchange."""

    def generate(self, system_role: str, messages: list[Message]) -> str:
        canonical = json.dumps(
            {"system_role": system_role, "messages": messages}, sort_keys=True
        ).encode("utf-8")
        digest = hashlib.sha256(canonical).hexdigest()[:12]
        last_user = next((m["content"] for m in reversed(messages) if m["role"] == "user"), "")
        headers = [
            line.rstrip(":")
            for line in last_user.splitlines()
            if line.endswith(":") and not line.startswith(" ")
        ]
        if headers:
            return f"[mock:{digest}] covered sections: {', '.join(headers)}"
        preview = " ".join(last_user.split())[:80]
        return f"[mock:{digest}] reply to: {preview}"


@dataclass
class RecordingGenerator(GeneratorClient):
    """Wraps another generator and records every call, for prompt-fidelity
    and call-count assertions."""

    inner: GeneratorClient = field(default_factory=DeterministicGenerator)
    calls: list[dict] = field(default_factory=list)

    def generate(self, system_role: str, messages: list[Message]) -> str:
        self.calls.append(
            {"system_role": system_role, "messages": [dict(m) for m in messages]}
        )
        return self.inner.generate(system_role, messages)


class FailingGenerator(GeneratorClient):
    """Fault-injection double: the model endpoint is down."""

    def generate(self, system_role: str, messages: list[Message]) -> str:
        raise UpstreamError("generator unavailable")


class ThresholdStubClassifier(ClassifierClient):
    """Bright fixtures read as pneumonia at the reference 0.92 confidence;
    dark fixtures read as normal at 0.97."""

    def __init__(self, threshold: float = 0.5):
        self.threshold = threshold

    def classify(self, image: np.ndarray) -> dict:
        if float(np.mean(image)) > self.threshold:
            return {"label": "Pneumonia", "confidence": 0.92}
        return {"label": "Normal", "confidence": 0.97}


class HttpGeneratorClient(GeneratorClient):
    """Client for a real inference endpoint; URL, model name and timeout come
    from configuration. Expects {"content": "..."} back."""

    def __init__(self, url: str, model: str, timeout: float = 30.0):
        self.url = url
        self.model = model
        self.timeout = timeout
        self._lock = threading.Lock()

    def generate(self, system_role: str, messages: list[Message]) -> str:
        import httpx

        body = {
            "model": self.model,
            "messages": [{"role": "system", "content": system_role}, *messages],
        }
        try:
            response = httpx.post(self.url, json=body, timeout=self.timeout)
            response.raise_for_status()
            return response.json()["content"]
        except Exception as exc:
            raise UpstreamError(f"generator endpoint failed: {exc}") from exc
