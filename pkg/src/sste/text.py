"""Deterministic text normalization turning raw field text into token lists.

The pipeline applies, in order: lowercasing, contraction expansion from a
shipped table, URL removal, accent folding to ASCII, digit-run verbalization
("3" -> "three"), punctuation removal, whitespace tokenization, stopword
removal, and dictionary-backed lemmatization with identity fallback.

The stopword, contraction, and lemma tables are plain-text data files
shipped with the package and path-configurable, so the exact behavior is
versioned alongside the code. Identical input always yields identical
output.
"""

from __future__ import annotations

import re
import unicodedata
from functools import lru_cache
from importlib import resources
from pathlib import Path

_URL_RE = re.compile(r"(?:[a-z][a-z0-9+.\-]*://\S+|www\.\S+)")
_DIGIT_RUN_RE = re.compile(r"\d+")
_NON_ALPHA_RE = re.compile(r"[^a-z\s]")
# Typographic apostrophes are normalized before contraction lookup.
_APOSTROPHE_TRANSLATION = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})

_ONES = (
    "zero one two three four five six seven eight nine ten eleven twelve "
    "thirteen fourteen fifteen sixteen seventeen eighteen nineteen"
).split()
_TENS = "twenty thirty forty fifty sixty seventy eighty ninety".split()


def _spell_below_hundred(n: int) -> str:
    if n < 20:
        return _ONES[n]
    tens, ones = divmod(n, 10)
    word = _TENS[tens - 2]
    return f"{word} {_ONES[ones]}" if ones else word


def _spell_below_ten_thousand(n: int) -> str:
    parts = []
    thousands, rest = divmod(n, 1000)
    if thousands:
        parts.append(f"{_ONES[thousands]} thousand")
    hundreds, rest = divmod(rest, 100)
    if hundreds:
        parts.append(f"{_ONES[hundreds]} hundred")
    if rest or not parts:
        parts.append(_spell_below_hundred(rest))
    return " ".join(parts)


def number_to_words(digits: str) -> str:
    """English words for a digit run.

    Values up to 9999 are spelled as numbers ("2021" -> "two thousand twenty
    one"); longer runs and zero-padded runs fall back to digit-by-digit
    ("007" -> "zero zero seven").
    """
    if len(digits) > 4 or (len(digits) > 1 and digits[0] == "0"):
        return " ".join(_ONES[int(d)] for d in digits)
    return _spell_below_ten_thousand(int(digits))


def _read_lines(path: Path) -> list[str]:
    return [
        line.strip()
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def _read_pairs(path: Path) -> dict[str, str]:
    table = {}
    for line in _read_lines(path):
        key, _, value = line.partition("\t")
        table[key.strip()] = value.strip()
    return table


def _data_path(name: str) -> Path:
    return Path(resources.files("sste").joinpath("data", name))


class TextPipeline:
    """Nine-stage normalizer over immutable shipped tables; thread-safe."""

    def __init__(
        self,
        stopword_path: str | Path | None = None,
        contraction_path: str | Path | None = None,
        lemma_path: str | Path | None = None,
    ):
        stopword_path = Path(stopword_path) if stopword_path else _data_path("stopwords.txt")
        contraction_path = Path(contraction_path) if contraction_path else _data_path("contractions.tsv")
        lemma_path = Path(lemma_path) if lemma_path else _data_path("lemmas.tsv")

        self.stopwords = frozenset(_read_lines(stopword_path))
        self.contractions = _read_pairs(contraction_path)
        self.lemmas = _read_pairs(lemma_path)

        alternatives = sorted(self.contractions, key=len, reverse=True)
        self._contraction_re = re.compile(
            r"(?<![a-z'])(?:" + "|".join(re.escape(key) for key in alternatives) + r")(?![a-z])"
        )

    def preprocess(self, text: str) -> list[str]:
        """Normalize raw text into an ordered list of lowercase lemmas.

        Empty input yields an empty list. Output tokens contain only [a-z]
        and none of the shipped stopwords.
        """
        if not text:
            return []
        s = text.lower()
        s = s.translate(_APOSTROPHE_TRANSLATION)
        s = self._contraction_re.sub(lambda m: self.contractions[m.group(0)], s)
        s = _URL_RE.sub(" ", s)
        s = unicodedata.normalize("NFKD", s).encode("ascii", "ignore").decode("ascii")
        s = _DIGIT_RUN_RE.sub(lambda m: f" {number_to_words(m.group(0))} ", s)
        # Unlisted apostrophe forms just lose the apostrophe; other
        # punctuation splits words.
        s = s.replace("'", "")
        s = _NON_ALPHA_RE.sub(" ", s)
        tokens = [t for t in s.split() if t not in self.stopwords]
        return [self.lemmas.get(t, t) for t in tokens]

    def preprocess_tag(self, phrase: str) -> list[str]:
        """Tokenize a tag phrase: lowercase + whitespace split only.

        Tags skip stopword removal and lemmatization so every tag maps to at
        least one token, exactly as it is spelled in the taxonomy.
        """
        return phrase.lower().split()


@lru_cache(maxsize=1)
def default_pipeline() -> TextPipeline:
    return TextPipeline()


def preprocess(text: str) -> list[str]:
    return default_pipeline().preprocess(text)


def preprocess_tag(phrase: str) -> list[str]:
    return default_pipeline().preprocess_tag(phrase)
