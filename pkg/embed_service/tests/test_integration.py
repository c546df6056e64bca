"""The detector's remote provider consuming this service over its wire protocol."""

import threading
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from embed_service import ServiceSettings, create_app

sste = pytest.importorskip("sste")

from sste.embeddings import ProviderError, RemoteEmbeddingProvider  # noqa: E402
from sste.featurize import FeaturizationMode, document_embedding, featurize_profiles  # noqa: E402
from sste.profiles import profile_from_dict  # noqa: E402

MODEL = "mini-2l-64d"


def make_provider(client):
    return RemoteEmbeddingProvider("http://testserver", model=MODEL, client=client)


@pytest.fixture(scope="module")
def provider():
    app = create_app(ServiceSettings(model=MODEL))
    with TestClient(app) as client:
        yield make_provider(client)


def sample_profile(pid="p1", label="LLP"):
    return profile_from_dict(
        {
            "id": pid,
            "label": label,
            "sections": [
                {"section": "overview", "items": [{"description": "building data pipelines"}]},
                {
                    "section": "experiences",
                    "items": [
                        {"role": "engineer", "description": "designed search systems"},
                        {"role": "manager", "description": "led platform teams"},
                    ],
                },
            ],
        }
    )


def test_health_negotiates_dim(provider):
    assert provider.dim == 64
    descriptor = provider.describe()
    assert descriptor.kind == "contextual-remote"
    assert descriptor.identity == MODEL


def test_document_embedding_over_the_wire(provider):
    for mode in FeaturizationMode:
        doc = document_embedding(provider, sample_profile(), mode)
        assert doc.vector.shape == (64,)
        assert np.all(np.isfinite(doc.vector))


def test_contextual_provider_never_excludes(provider):
    profiles = [sample_profile(f"p{i}") for i in range(3)]
    result = featurize_profiles(profiles, provider, FeaturizationMode.SSTE, "embedding")
    assert result.excluded_ids == ()
    assert result.X.shape == (3, 64)


def test_deterministic_featurization(provider):
    a = document_embedding(provider, sample_profile(), FeaturizationMode.SSTE).vector
    b = document_embedding(provider, sample_profile(), FeaturizationMode.SSTE).vector
    assert np.allclose(a, b, atol=1e-6, rtol=0)


def test_wrong_model_name_is_provider_error():
    app = create_app(ServiceSettings(model=MODEL))
    with TestClient(app) as client:
        provider = RemoteEmbeddingProvider("http://testserver", model="mini-4l-32d", client=client)
        with pytest.raises(ProviderError, match="404"):
            provider.embed_tokens(["hello"])


def test_live_server_round_trip():
    """Full socket path: uvicorn in a thread, provider over real HTTP."""
    uvicorn = pytest.importorskip("uvicorn")
    config = uvicorn.Config(
        create_app(ServiceSettings(model=MODEL)),
        host="127.0.0.1",
        port=8917,
        log_level="error",
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        deadline = time.time() + 10
        while not server.started:
            if time.time() > deadline:
                pytest.skip("uvicorn did not start (sockets unavailable)")
            time.sleep(0.05)
        provider = RemoteEmbeddingProvider("http://127.0.0.1:8917", model=MODEL)
        doc = document_embedding(provider, sample_profile(), FeaturizationMode.SSTE)
        assert doc.vector.shape == (64,)
    finally:
        server.should_exit = True
        thread.join(timeout=5)
