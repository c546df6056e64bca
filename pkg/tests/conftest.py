import numpy as np
import pytest

from sste.embeddings import EmbeddingTable, StaticEmbeddingProvider
from sste.profiles import Label, Profile, Section, SectionEntry, all_tag_phrases
from sste.text import default_pipeline


def tag_token_set() -> set[str]:
    pipeline = default_pipeline()
    tokens = set()
    for phrase in all_tag_phrases():
        tokens.update(pipeline.preprocess_tag(phrase))
    return tokens


def make_table(extra: dict[str, np.ndarray] | None = None, dim: int = 4, seed: int = 0) -> EmbeddingTable:
    """A table covering every tag token (seeded random) plus explicit extras."""
    rng = np.random.default_rng(seed)
    vectors = {token: rng.standard_normal(dim) for token in sorted(tag_token_set())}
    for token, vector in (extra or {}).items():
        vectors[token] = np.asarray(vector, dtype=np.float64)
        dim = len(vectors[token])
    for token in vectors:
        if vectors[token].shape != (dim,):
            vectors[token] = rng.standard_normal(dim)
    return EmbeddingTable(vectors, dim, f"test:seed={seed}")


@pytest.fixture
def provider() -> StaticEmbeddingProvider:
    extra = {
        "alpha": np.array([1.0, 0.0, 0.0, 0.0]),
        "beta": np.array([0.0, 2.0, 0.0, 0.0]),
        "gamma": np.array([0.0, 0.0, 3.0, 0.0]),
        "delta": np.array([0.0, 0.0, 0.0, 4.0]),
    }
    return StaticEmbeddingProvider(make_table(extra))


def profile_with(sections: dict[Section, list[dict[str, str]]], label=Label.LLP, pid="p1") -> Profile:
    entries = tuple(SectionEntry(section, tuple(items)) for section, items in sections.items())
    return Profile(pid, label, entries)
