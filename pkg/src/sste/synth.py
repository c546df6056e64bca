"""Seeded synthetic corpus generator with a controllable class signal.

Profiles are sampled section-by-section with per-section completion
probabilities (defaults follow the observed fill rates of real profiles:
Experiences ~0.99, Overview ~0.78, Scores ~0.01, ...). Subsection text mixes
fixed boilerplate words with body tokens drawn either from a shared pool or
from label-specific pools; the signal strength ``sigma`` is the probability
that a body token comes from the label pool. ``sigma=1`` with disjoint pools
yields a cleanly separable corpus, ``sigma=0`` yields no learnable signal.

Every generated word survives the text pipeline unchanged (lowercase
alphabetic, not a stopword, lemma-stable), and a companion word-vector file
of seeded random unit vectors covers the full post-pipeline vocabulary plus
every taxonomy tag token, so the fail-fast tag check always passes without
any downloaded embeddings. A token's vector depends only on (embed seed,
token), never on corpus composition.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .embeddings import EmbeddingTable
from .profiles import (
    SECTION_ORDER,
    TAXONOMY,
    Dataset,
    Label,
    Profile,
    Section,
    SectionEntry,
    all_tag_phrases,
    serialize_dataset,
)
from .text import TextPipeline, default_pipeline

DEFAULT_COMPLETION: dict[Section, float] = {
    Section.INTRODUCTION: 1.0,
    Section.OVERVIEW: 0.7804,
    Section.EXPERIENCES: 0.9862,
    Section.EDUCATIONS: 0.9463,
    Section.LICENSES: 0.3242,
    Section.VOLUNTEERS: 0.3133,
    Section.SKILLS: 0.8617,
    Section.PROJECTS: 0.0804,
    Section.PUBLICATIONS: 0.1288,
    Section.COURSES: 0.0908,
    Section.HONORS: 0.2104,
    Section.SCORES: 0.01,
    Section.LANGUAGES: 0.2767,
    Section.ORGANIZATIONS: 0.1971,
}

_CONSONANTS = "bdfgjklmnprstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class CorpusSpec:
    """Knobs for one synthetic corpus; everything derives from ``seed``."""

    n_llp: int = 100
    n_flp: int = 100
    n_clp: int = 0
    seed: int = 0
    sigma: float = 1.0
    completion: Mapping[Section, float] = field(default_factory=lambda: dict(DEFAULT_COMPLETION))
    shared_vocab: int = 120
    class_vocab: int = 40
    dim: int = 32
    signal_sections: tuple[Section, ...] | None = None
    merge_fake_vocab: bool = False
    min_items: int = 1
    max_items: int = 3
    min_tokens: int = 4
    max_tokens: int = 10

    def __post_init__(self):
        if not 0.0 <= self.sigma <= 1.0:
            raise ValueError("sigma must lie in [0, 1]")
        if min(self.n_llp, self.n_flp, self.n_clp) < 0:
            raise ValueError("label counts must be nonnegative")
        for probability in self.completion.values():
            if not 0.0 <= probability <= 1.0:
                raise ValueError("completion probabilities must lie in [0, 1]")


@dataclass(frozen=True)
class VocabularyBank:
    """Shared pool, per-label pools, and per-subsection boilerplate."""

    shared: tuple[str, ...]
    by_label: dict[Label, tuple[str, ...]]
    templates: dict[tuple[Section, str], tuple[str, ...]]


def _syllable_word(rng: np.random.Generator, syllables: int = 3) -> str:
    return "".join(
        _CONSONANTS[rng.integers(len(_CONSONANTS))] + _VOWELS[rng.integers(len(_VOWELS))]
        for _ in range(syllables)
    )


def _pipeline_stable(word: str, pipeline: TextPipeline) -> bool:
    return pipeline.preprocess(word) == [word]


def _draw_words(rng: np.random.Generator, count: int, taken: set[str], pipeline: TextPipeline) -> tuple[str, ...]:
    words = []
    while len(words) < count:
        word = _syllable_word(rng, syllables=int(rng.integers(3, 5)))
        if word in taken or not _pipeline_stable(word, pipeline):
            continue
        taken.add(word)
        words.append(word)
    return tuple(words)


def build_vocabulary(spec: CorpusSpec, pipeline: TextPipeline | None = None) -> VocabularyBank:
    """Deterministic pools and templates for a spec's seed.

    Pools are pairwise disjoint, so ``sigma=1`` guarantees that no label's
    body tokens ever appear under another label.
    """
    pipeline = pipeline or default_pipeline()
    rng = np.random.default_rng([spec.seed, 0x5EED])
    taken: set[str] = set()
    shared = _draw_words(rng, spec.shared_vocab, taken, pipeline)
    by_label = {
        label: _draw_words(rng, spec.class_vocab, taken, pipeline) for label in Label
    }
    if spec.merge_fake_vocab:
        # Binary fixtures: both fake classes draw from one pool, so text
        # differs by fake-vs-legit only.
        by_label[Label.CLP] = by_label[Label.FLP]
    templates = {}
    for section in SECTION_ORDER:
        for subsection in TAXONOMY[section]:
            picks = rng.choice(len(shared), size=2, replace=False)
            templates[(section, subsection)] = tuple(shared[i] for i in picks)
    return VocabularyBank(shared, by_label, templates)


def generate_profile(
    label: Label,
    spec: CorpusSpec,
    rng: np.random.Generator,
    bank: VocabularyBank,
    profile_id: str,
) -> Profile:
    """One synthetic profile; consumes ``rng`` state deterministically."""
    signal_sections = (
        set(spec.signal_sections) if spec.signal_sections is not None else set(SECTION_ORDER)
    )
    entries = []
    for section in SECTION_ORDER:
        probability = spec.completion.get(section, 0.0)
        if rng.random() >= probability:
            continue
        n_items = int(rng.integers(spec.min_items, spec.max_items + 1))
        items = []
        for _ in range(n_items):
            item = {}
            for subsection in TAXONOMY[section]:
                words = list(bank.templates[(section, subsection)])
                n_body = int(rng.integers(spec.min_tokens, spec.max_tokens + 1))
                label_pool = bank.by_label[label]
                for _ in range(n_body):
                    from_label = (
                        section in signal_sections and rng.random() < spec.sigma
                    )
                    pool = label_pool if from_label else bank.shared
                    words.append(pool[int(rng.integers(len(pool)))])
                item[subsection] = " ".join(words)
            items.append(item)
        entries.append(SectionEntry(section, tuple(items)))
    return Profile(profile_id, label, tuple(entries))


def token_vector(token: str, dim: int, seed: int) -> np.ndarray:
    """Seeded random unit vector; depends only on (seed, token)."""
    token_hash = int.from_bytes(hashlib.sha256(token.encode("utf-8")).digest()[:8], "big")
    rng = np.random.default_rng([seed, token_hash])
    vector = rng.standard_normal(dim)
    return vector / np.linalg.norm(vector)


def corpus_vocabulary(dataset: Dataset, pipeline: TextPipeline | None = None) -> tuple[str, ...]:
    """Sorted union of all post-pipeline tokens and all tag tokens."""
    pipeline = pipeline or default_pipeline()
    vocabulary: set[str] = set()
    for phrase in all_tag_phrases():
        vocabulary.update(pipeline.preprocess_tag(phrase))
    for profile in dataset.profiles:
        for entry in profile.sections:
            for item in entry.items:
                for text in item.values():
                    vocabulary.update(pipeline.preprocess(text))
    return tuple(sorted(vocabulary))


def generate_corpus(
    spec: CorpusSpec, pipeline: TextPipeline | None = None
) -> tuple[Dataset, EmbeddingTable]:
    """A labeled dataset and a covering embedding table, both seed-determined."""
    pipeline = pipeline or default_pipeline()
    bank = build_vocabulary(spec, pipeline)
    rng = np.random.default_rng([spec.seed, 0xDA7A])
    profiles = []
    for label, count in ((Label.LLP, spec.n_llp), (Label.FLP, spec.n_flp), (Label.CLP, spec.n_clp)):
        for index in range(count):
            profile_id = f"{label.value.lower()}-{index:05d}"
            profiles.append(generate_profile(label, spec, rng, bank, profile_id))
    dataset = Dataset(tuple(profiles))
    vocabulary = corpus_vocabulary(dataset, pipeline)
    vectors = {token: token_vector(token, spec.dim, spec.seed) for token in vocabulary}
    table = EmbeddingTable(vectors, spec.dim, f"synthetic:seed={spec.seed}:dim={spec.dim}")
    return dataset, table


def write_embedding_table(table: EmbeddingTable, path: str | Path) -> None:
    """Write a table in the plain word-vector text format, tokens sorted."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for token in sorted(table.vectors):
            components = " ".join(repr(v) for v in table.vectors[token].tolist())
            handle.write(f"{token} {components}\n")


def write_corpus(
    spec: CorpusSpec, out_dir: str | Path, stem: str = "corpus"
) -> tuple[Path, Path]:
    """Generate and write ``<stem>.jsonl`` + ``<stem>.vec``; byte-identical per seed."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset, table = generate_corpus(spec)
    dataset_path = out_dir / f"{stem}.jsonl"
    vectors_path = out_dir / f"{stem}.vec"
    serialize_dataset(dataset, dataset_path)
    write_embedding_table(table, vectors_path)
    return dataset_path, vectors_path


def spec_from_dict(obj: Mapping) -> CorpusSpec:
    """Build a CorpusSpec from decoded JSON (section keys by value name)."""
    kwargs = dict(obj)
    if "completion" in kwargs:
        kwargs["completion"] = {
            Section(key): float(value) for key, value in kwargs["completion"].items()
        }
    if kwargs.get("signal_sections") is not None:
        kwargs["signal_sections"] = tuple(Section(s) for s in kwargs["signal_sections"])
    return CorpusSpec(**kwargs)
