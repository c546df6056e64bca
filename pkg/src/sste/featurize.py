"""Tag-debiased document embeddings.

Each profile is flattened into per-(item, subsection) token lists. A
subsection's feature is the mean of its token vectors minus a tag vector G:

* ``sste`` mode: G = (Em(section tag) + Em(subsection tag)) / 2
* ``ste``  mode: G = Em(section tag)
* ``raw``  mode: G = 0 (plain mean pooling)

Subtracting G strips the meaning the field shares with every profile of the
same shape, leaving the content that actually discriminates. The document
embedding is the mean of all subsection features; it is what the classifiers
consume. A numeric feature vector (per-section component counts plus token
and character totals) provides the count-based baseline, and the combined
family concatenates both.

Subsections whose tokens are all out-of-vocabulary are skipped rather than
contributing -G, and a profile with no usable subsection at all raises
:class:`EmptyDocumentError` instead of yielding a silent zero vector.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .profiles import (
    SECTION_ORDER,
    TAXONOMY,
    Label,
    Profile,
    Section,
    component_counts,
    tag_phrase,
)
from .text import TextPipeline, default_pipeline


class FeaturizationMode(str, Enum):
    SSTE = "sste"
    STE = "ste"
    RAW = "raw"


FEATURE_FAMILIES = ("embedding", "numeric", "combined")

NUMERIC_FEATURE_NAMES: tuple[str, ...] = tuple(
    f"{section.value}_components" for section in SECTION_ORDER
) + ("total_tokens", "total_chars")


class EmptyDocumentError(ValueError):
    """A profile produced no subsection features (no text, or all OOV)."""

    def __init__(self, profile_ids: Sequence[str]):
        self.profile_ids = tuple(profile_ids)
        super().__init__(
            "no embeddable text in profile(s): " + ", ".join(self.profile_ids)
        )


@dataclass(frozen=True)
class SubsectionTokens:
    """Preprocessed tokens of one subsection of one item, in profile order."""

    section: Section
    subsection: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class SubsectionFeature:
    """Debiased mean vector of one subsection, with its provenance."""

    vector: np.ndarray
    section: Section
    subsection: str
    n_tokens: int
    n_embedded: int


@dataclass(frozen=True)
class DocumentEmbedding:
    vector: np.ndarray
    mode: FeaturizationMode
    profile_id: str


def collect_subsections(
    profile: Profile, pipeline: TextPipeline | None = None
) -> list[SubsectionTokens]:
    """Flatten a profile into per-(item, subsection) token lists.

    Pairs whose preprocessed text is empty are dropped. Items keep profile
    order; within an item, subsections follow taxonomy order so output does
    not depend on JSON key order.
    """
    pipeline = pipeline or default_pipeline()
    collected = []
    for entry in profile.sections:
        for item in entry.items:
            for subsection in TAXONOMY[entry.section]:
                text = item.get(subsection)
                if not text:
                    continue
                tokens = pipeline.preprocess(text)
                if tokens:
                    collected.append(
                        SubsectionTokens(entry.section, subsection, tuple(tokens))
                    )
    return collected


def tag_vector(provider, section: Section, subsection: str, mode: FeaturizationMode) -> np.ndarray:
    """The vector G subtracted from a subsection's mean token vector."""
    if mode is FeaturizationMode.RAW:
        return np.zeros(provider.dim, dtype=np.float64)
    section_vector = provider.embed_tag(tag_phrase(section))
    if mode is FeaturizationMode.STE:
        return np.asarray(section_vector, dtype=np.float64)
    subsection_vector = provider.embed_tag(tag_phrase(subsection))
    return (np.asarray(section_vector, dtype=np.float64) + subsection_vector) / 2.0


def subsection_feature(
    provider,
    st: SubsectionTokens,
    mode: FeaturizationMode,
    context: Sequence[str] | None = None,
    start: int | None = None,
) -> SubsectionFeature | None:
    """Mean of embeddable token vectors minus G; ``None`` when all tokens are OOV."""
    if context is not None and start is not None:
        vectors = provider.embed_tokens(st.tokens, context, start=start)
    else:
        vectors = provider.embed_tokens(st.tokens, context)
    kept = [v for v in vectors if v is not None]
    if not kept:
        return None
    mean = np.mean(np.stack(kept), axis=0) if len(kept) > 1 else np.array(kept[0], dtype=np.float64)
    g = tag_vector(provider, st.section, st.subsection, mode)
    return SubsectionFeature(
        vector=mean - g,
        section=st.section,
        subsection=st.subsection,
        n_tokens=len(st.tokens),
        n_embedded=len(kept),
    )


def _subsection_features(
    provider,
    profile: Profile,
    mode: FeaturizationMode,
    pipeline: TextPipeline | None = None,
) -> list[SubsectionFeature]:
    subsections = collect_subsections(profile, pipeline)
    # The concatenated document is the context for contextual providers;
    # static providers ignore it.
    context: list[str] = []
    starts = []
    for st in subsections:
        starts.append(len(context))
        context.extend(st.tokens)
    features = []
    for st, start in zip(subsections, starts):
        feature = subsection_feature(provider, st, mode, context=context, start=start)
        if feature is not None:
            features.append(feature)
    return features


def document_embedding(
    provider,
    profile: Profile,
    mode: FeaturizationMode,
    pipeline: TextPipeline | None = None,
) -> DocumentEmbedding:
    """Mean of all non-skipped subsection features for one profile."""
    features = _subsection_features(provider, profile, mode, pipeline)
    if not features:
        raise EmptyDocumentError([profile.id])
    stacked = np.stack([f.vector for f in features])
    return DocumentEmbedding(np.mean(stacked, axis=0), mode, profile.id)


def numeric_features(profile: Profile, pipeline: TextPipeline | None = None) -> np.ndarray:
    """Count-based features: 14 per-section component counts, total token
    count, and total raw character length, in the documented fixed order."""
    pipeline = pipeline or default_pipeline()
    counts = component_counts(profile)
    total_tokens = 0
    total_chars = 0
    for entry in profile.sections:
        for item in entry.items:
            for subsection in TAXONOMY[entry.section]:
                text = item.get(subsection)
                if not text:
                    continue
                total_chars += len(text)
                total_tokens += len(pipeline.preprocess(text))
    values = [float(counts[section]) for section in SECTION_ORDER]
    values.append(float(total_tokens))
    values.append(float(total_chars))
    return np.array(values, dtype=np.float64)


def combined_features(
    provider,
    profile: Profile,
    mode: FeaturizationMode,
    pipeline: TextPipeline | None = None,
) -> np.ndarray:
    """Document embedding concatenated with the numeric vector (d + 16)."""
    doc = document_embedding(provider, profile, mode, pipeline)
    return np.concatenate([doc.vector, numeric_features(profile, pipeline)])


@dataclass(frozen=True)
class FeaturizationResult:
    """Feature matrix for the profiles that produced features.

    ``ids`` and ``labels`` align with the rows of ``X``; profiles excluded
    by :class:`EmptyDocumentError` are listed in ``excluded_ids`` and keep
    their input order in reports.
    """

    X: np.ndarray
    ids: tuple[str, ...]
    labels: tuple[Label, ...]
    excluded_ids: tuple[str, ...]
    family: str
    mode: FeaturizationMode


def featurize_profiles(
    profiles: Sequence[Profile],
    provider=None,
    mode: FeaturizationMode = FeaturizationMode.SSTE,
    family: str = "embedding",
    pipeline: TextPipeline | None = None,
    jobs: int = 1,
) -> FeaturizationResult:
    """Featurize profiles into a matrix, in input order.

    ``family`` selects embedding, numeric, or combined features. The numeric
    family needs no provider and never excludes profiles. Rows are emitted
    in input order regardless of ``jobs``.
    """
    if family not in FEATURE_FAMILIES:
        raise ValueError(f"unknown feature family {family!r}")
    if family != "numeric" and provider is None:
        raise ValueError(f"feature family {family!r} requires an embedding provider")
    pipeline = pipeline or default_pipeline()
    mode = FeaturizationMode(mode)

    def one(profile: Profile) -> np.ndarray | None:
        try:
            if family == "numeric":
                return numeric_features(profile, pipeline)
            if family == "combined":
                return combined_features(provider, profile, mode, pipeline)
            return document_embedding(provider, profile, mode, pipeline).vector
        except EmptyDocumentError:
            return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, profiles))
    else:
        rows = [one(profile) for profile in profiles]

    ids, labels, kept, excluded = [], [], [], []
    for profile, row in zip(profiles, rows):
        if row is None:
            excluded.append(profile.id)
        else:
            ids.append(profile.id)
            labels.append(profile.label)
            kept.append(row)
    if kept:
        X = np.stack(kept)
    else:
        X = np.zeros((0, 0), dtype=np.float64)
    return FeaturizationResult(
        X, tuple(ids), tuple(labels), tuple(excluded), family, mode
    )


class SSTEVectorizer:
    """Transformer-style wrapper: profiles in, feature matrix out.

    Follows the fit/transform estimator convention so the featurizer drops
    into standard pipelines; ``transform`` preserves one row per profile and
    raises :class:`EmptyDocumentError` when a profile has no embeddable
    text (batch callers that prefer skip-and-count semantics use
    :func:`featurize_profiles`).
    """

    def __init__(
        self,
        provider=None,
        mode: FeaturizationMode = FeaturizationMode.SSTE,
        family: str = "embedding",
        pipeline: TextPipeline | None = None,
    ):
        self.provider = provider
        self.mode = mode
        self.family = family
        self.pipeline = pipeline

    def get_params(self, deep: bool = True) -> dict:
        return {
            "provider": self.provider,
            "mode": self.mode,
            "family": self.family,
            "pipeline": self.pipeline,
        }

    def set_params(self, **params) -> "SSTEVectorizer":
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def fit(self, profiles: Iterable[Profile], y=None) -> "SSTEVectorizer":
        if self.family not in FEATURE_FAMILIES:
            raise ValueError(f"unknown feature family {self.family!r}")
        if self.family != "numeric" and self.provider is None:
            raise ValueError(f"feature family {self.family!r} requires an embedding provider")
        if self.family == "numeric":
            self.n_features_out_ = len(NUMERIC_FEATURE_NAMES)
        elif self.family == "combined":
            self.n_features_out_ = self.provider.dim + len(NUMERIC_FEATURE_NAMES)
        else:
            self.n_features_out_ = self.provider.dim
        return self

    def transform(self, profiles: Sequence[Profile]) -> np.ndarray:
        if not hasattr(self, "n_features_out_"):
            raise RuntimeError("SSTEVectorizer is not fitted; call fit first")
        result = featurize_profiles(
            profiles, self.provider, self.mode, self.family, self.pipeline
        )
        if result.excluded_ids:
            raise EmptyDocumentError(result.excluded_ids)
        return result.X

    def fit_transform(self, profiles: Sequence[Profile], y=None) -> np.ndarray:
        return self.fit(profiles, y).transform(profiles)

    def get_feature_names_out(self) -> tuple[str, ...]:
        if not hasattr(self, "n_features_out_"):
            raise RuntimeError("SSTEVectorizer is not fitted; call fit first")
        if self.family == "numeric":
            return NUMERIC_FEATURE_NAMES
        embedding_names = tuple(f"f{i}" for i in range(self.provider.dim))
        if self.family == "combined":
            return embedding_names + NUMERIC_FEATURE_NAMES
        return embedding_names
