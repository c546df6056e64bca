"""Profile and dataset data model.

A profile is a labeled bundle of sections (Experiences, Educations, Skills,
...), each holding an ordered list of items whose fields are free text keyed
by subsection (one item per job, degree, project, ...). The section and
subsection taxonomy is closed: records using unknown keys are rejected at
parse time.

Dynamic account information (connection counts, recommendations, activity)
is accepted under an optional ``dynamic`` object so collected files load
unmodified, but nothing downstream reads it: the detector only consumes
data available at registration time.

Dataset files are UTF-8 JSON lines, one profile per line::

    {"id": "p1", "label": "LLP", "sections": [
        {"section": "experiences", "items": [{"role": "engineer", ...}]}
    ], "dynamic": {...}}
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping


class DatasetError(ValueError):
    """A dataset file or record violates the schema or taxonomy."""


class Label(str, Enum):
    """Profile class: legitimate, human-made fake, or LLM-generated fake."""

    LLP = "LLP"
    FLP = "FLP"
    CLP = "CLP"


class Section(str, Enum):
    """The fourteen profile sections, in canonical order."""

    INTRODUCTION = "introduction"
    OVERVIEW = "overview"
    EXPERIENCES = "experiences"
    EDUCATIONS = "educations"
    LICENSES = "licenses"
    VOLUNTEERS = "volunteers"
    HONORS = "honors"
    PROJECTS = "projects"
    PUBLICATIONS = "publications"
    COURSES = "courses"
    SKILLS = "skills"
    SCORES = "scores"
    LANGUAGES = "languages"
    ORGANIZATIONS = "organizations"


# Closed taxonomy: every subsection key belongs to exactly one section entry
# here, and parsing rejects anything else.
TAXONOMY: dict[Section, tuple[str, ...]] = {
    Section.INTRODUCTION: ("workplace", "location"),
    Section.OVERVIEW: ("description",),
    Section.EXPERIENCES: ("workplace", "role", "duration", "location", "description"),
    Section.EDUCATIONS: ("institute", "degree", "duration", "description"),
    Section.LICENSES: ("title", "company", "description"),
    Section.VOLUNTEERS: ("role", "organization", "duration", "description"),
    Section.HONORS: ("award", "information", "description"),
    Section.PROJECTS: ("title", "date", "description"),
    Section.PUBLICATIONS: ("title", "journal", "description"),
    Section.COURSES: ("courses",),
    Section.SKILLS: ("skills",),
    Section.SCORES: ("test", "information"),
    Section.LANGUAGES: ("languages",),
    Section.ORGANIZATIONS: ("organization", "role"),
}

SECTION_ORDER: tuple[Section, ...] = tuple(Section)


def tag_phrase(tag: Section | str) -> str:
    """Human-readable phrase for a section or subsection tag.

    Snake-case keys become space-separated words so multi-word tags embed
    as the mean of their word vectors.
    """
    key = tag.value if isinstance(tag, Section) else tag
    return key.replace("_", " ")


def all_tag_phrases() -> tuple[str, ...]:
    """Every distinct tag phrase in the taxonomy (sections and subsections)."""
    phrases = [tag_phrase(section) for section in SECTION_ORDER]
    for subsections in TAXONOMY.values():
        phrases.extend(tag_phrase(key) for key in subsections)
    return tuple(dict.fromkeys(phrases))


@dataclass(frozen=True)
class SectionEntry:
    """One section of a profile: an ordered list of subsection→text items.

    Treated as immutable after construction; items must only use subsection
    keys belonging to ``section``.
    """

    section: Section
    items: tuple[Mapping[str, str], ...]

    def __post_init__(self):
        allowed = TAXONOMY[self.section]
        for item in self.items:
            for key, text in item.items():
                if key not in allowed:
                    raise DatasetError(
                        f"unknown subsection {key!r} in section {self.section.value!r}"
                    )
                if not isinstance(text, str):
                    raise DatasetError(
                        f"subsection {key!r} text must be a string, got {type(text).__name__}"
                    )


@dataclass(frozen=True)
class Profile:
    """A labeled profile record. ``dynamic`` is carried but never featurized."""

    id: str
    label: Label
    sections: tuple[SectionEntry, ...]
    dynamic: Mapping | None = None

    def __post_init__(self):
        if not self.id:
            raise DatasetError("profile id must be nonempty")
        seen = set()
        for entry in self.sections:
            if entry.section in seen:
                raise DatasetError(f"duplicate section {entry.section.value!r}")
            seen.add(entry.section)

    def section_entry(self, section: Section) -> SectionEntry | None:
        for entry in self.sections:
            if entry.section is section:
                return entry
        return None

    def without_section(self, section: Section) -> "Profile":
        """Copy of this profile with one section's text removed entirely."""
        kept = tuple(e for e in self.sections if e.section is not section)
        return Profile(self.id, self.label, kept, self.dynamic)


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of profiles with unique ids."""

    profiles: tuple[Profile, ...]

    def __post_init__(self):
        seen = set()
        for profile in self.profiles:
            if profile.id in seen:
                raise DatasetError(f"duplicate profile id {profile.id!r}")
            seen.add(profile.id)

    def __len__(self) -> int:
        return len(self.profiles)

    @property
    def label_counts(self) -> dict[Label, int]:
        counts = {label: 0 for label in Label}
        for profile in self.profiles:
            counts[profile.label] += 1
        return counts

    def by_label(self, label: Label) -> tuple[Profile, ...]:
        return tuple(p for p in self.profiles if p.label is label)


def component_counts(profile: Profile) -> dict[Section, int]:
    """Number of items per section; sections missing from the profile map to 0."""
    counts = {section: 0 for section in SECTION_ORDER}
    for entry in profile.sections:
        counts[entry.section] = len(entry.items)
    return counts


def profile_from_dict(obj: Mapping, where: str = "record") -> Profile:
    """Build a Profile from a decoded JSON object, validating the taxonomy."""
    if not isinstance(obj, Mapping):
        raise DatasetError(f"profile must be a JSON object at {where}")
    for required in ("id", "label", "sections"):
        if required not in obj:
            raise DatasetError(f"missing field {required!r} at {where}")
    raw_label = obj["label"]
    try:
        label = Label(raw_label)
    except ValueError:
        raise DatasetError(f"unknown label {raw_label!r} at {where}") from None

    entries = []
    seen_sections = set()
    for raw_entry in obj["sections"]:
        if not isinstance(raw_entry, Mapping) or "section" not in raw_entry:
            raise DatasetError(f"malformed section entry at {where}")
        raw_section = raw_entry["section"]
        try:
            section = Section(raw_section)
        except ValueError:
            raise DatasetError(f"unknown section {raw_section!r} at {where}") from None
        if section in seen_sections:
            raise DatasetError(f"duplicate section {raw_section!r} at {where}")
        seen_sections.add(section)
        items = raw_entry.get("items", [])
        if not isinstance(items, list):
            raise DatasetError(f"section items must be a list at {where}")
        try:
            entries.append(SectionEntry(section, tuple(dict(item) for item in items)))
        except DatasetError as exc:
            raise DatasetError(f"{exc} at {where}") from None

    profile_id = obj["id"]
    if not isinstance(profile_id, str) or not profile_id:
        raise DatasetError(f"profile id must be a nonempty string at {where}")
    dynamic = obj.get("dynamic")
    return Profile(profile_id, label, tuple(entries), dynamic)


def profile_to_dict(profile: Profile) -> dict:
    obj = {
        "id": profile.id,
        "label": profile.label.value,
        "sections": [
            {"section": entry.section.value, "items": [dict(item) for item in entry.items]}
            for entry in profile.sections
        ],
    }
    if profile.dynamic is not None:
        obj["dynamic"] = dict(profile.dynamic)
    return obj


def parse_dataset(path: str | Path) -> Dataset:
    """Parse a JSON-lines dataset file, preserving record order.

    Raises DatasetError naming the offending line for malformed JSON,
    unknown labels, unknown section or subsection keys, and duplicate ids.
    Blank lines are skipped.
    """
    path = Path(path)
    profiles: list[Profile] = []
    seen_ids: set[str] = set()
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"invalid JSON at line {line_no}: {exc.msg}") from None
            profile = profile_from_dict(obj, where=f"line {line_no}")
            if profile.id in seen_ids:
                raise DatasetError(f"duplicate profile id {profile.id!r} at line {line_no}")
            seen_ids.add(profile.id)
            profiles.append(profile)
    return Dataset(tuple(profiles))


def serialize_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset as JSON lines; round-trips through parse_dataset."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for profile in dataset.profiles:
            handle.write(json.dumps(profile_to_dict(profile), ensure_ascii=False))
            handle.write("\n")


def dataset_hash(dataset: Dataset) -> str:
    """Content hash over a canonical serialization, stable across machines."""
    digest = hashlib.sha256()
    for profile in dataset.profiles:
        canonical = json.dumps(profile_to_dict(profile), sort_keys=True, ensure_ascii=False)
        digest.update(canonical.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()
