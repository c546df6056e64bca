import json

import pytest

from sste.profiles import (
    TAXONOMY,
    Dataset,
    DatasetError,
    Label,
    Profile,
    Section,
    SectionEntry,
    component_counts,
    dataset_hash,
    parse_dataset,
    profile_from_dict,
    profile_to_dict,
    serialize_dataset,
)

FULL_RECORD = {
    "id": "p42",
    "label": "FLP",
    "sections": [
        {
            "section": "experiences",
            "items": [
                {"role": "engineer", "workplace": "acme", "duration": "2 years"},
                {"role": "manager", "description": "led a team"},
            ],
        },
        {"section": "skills", "items": [{"skills": "python, sql"}]},
    ],
    "dynamic": {"connections": 12, "followers": 3},
}


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_minimal_record(tmp_path):
    path = write_lines(tmp_path / "d.jsonl", ['{"id":"p1","label":"LLP","sections":[]}'])
    dataset = parse_dataset(path)
    assert len(dataset) == 1
    assert dataset.profiles[0].sections == ()
    assert dataset.label_counts[Label.LLP] == 1


def test_unknown_label_cites_line(tmp_path):
    path = write_lines(
        tmp_path / "d.jsonl",
        ['{"id":"p1","label":"LLP","sections":[]}', '{"id":"p2","label":"SPAM","sections":[]}'],
    )
    with pytest.raises(DatasetError, match=r"unknown label 'SPAM' at line 2"):
        parse_dataset(path)


def test_round_trip_full_record(tmp_path):
    path = write_lines(tmp_path / "d.jsonl", [json.dumps(FULL_RECORD)])
    dataset = parse_dataset(path)
    assert profile_to_dict(dataset.profiles[0]) == FULL_RECORD

    out = tmp_path / "out.jsonl"
    serialize_dataset(dataset, out)
    again = parse_dataset(out)
    assert [profile_to_dict(p) for p in again.profiles] == [FULL_RECORD]
    assert dataset_hash(again) == dataset_hash(dataset)


def test_malformed_json_cites_line(tmp_path):
    path = write_lines(tmp_path / "d.jsonl", ['{"id":"p1","label":"LLP","sections":[]}', "{nope"])
    with pytest.raises(DatasetError, match="line 2"):
        parse_dataset(path)


def test_duplicate_id_rejected(tmp_path):
    line = '{"id":"p1","label":"LLP","sections":[]}'
    path = write_lines(tmp_path / "d.jsonl", [line, line])
    with pytest.raises(DatasetError, match=r"duplicate profile id 'p1' at line 2"):
        parse_dataset(path)


def test_unknown_section_and_subsection_named():
    with pytest.raises(DatasetError, match="unknown section 'hobbies'"):
        profile_from_dict({"id": "x", "label": "LLP", "sections": [{"section": "hobbies", "items": []}]})
    with pytest.raises(DatasetError, match="unknown subsection 'salary'"):
        profile_from_dict(
            {"id": "x", "label": "LLP", "sections": [{"section": "experiences", "items": [{"salary": "1"}]}]}
        )


def test_duplicate_section_rejected():
    with pytest.raises(DatasetError, match="duplicate section"):
        profile_from_dict(
            {
                "id": "x",
                "label": "LLP",
                "sections": [
                    {"section": "skills", "items": []},
                    {"section": "skills", "items": []},
                ],
            }
        )


def test_subsection_belongs_to_one_section():
    # 'institute' is an education field; experiences must reject it.
    with pytest.raises(DatasetError, match="institute"):
        SectionEntry(Section.EXPERIENCES, ({"institute": "u"},))


def test_taxonomy_is_closed_and_complete():
    assert len(TAXONOMY) == 14
    assert TAXONOMY[Section.INTRODUCTION] == ("workplace", "location")
    assert TAXONOMY[Section.EXPERIENCES] == ("workplace", "role", "duration", "location", "description")
    assert TAXONOMY[Section.SCORES] == ("test", "information")
    assert sum(len(v) for v in TAXONOMY.values()) == 35


def test_component_counts():
    profile = profile_from_dict(FULL_RECORD)
    counts = component_counts(profile)
    assert counts[Section.EXPERIENCES] == 2
    assert counts[Section.SKILLS] == 1
    assert counts[Section.OVERVIEW] == 0
    assert sum(counts.values()) == sum(len(e.items) for e in profile.sections)

    empty = Profile("e", Label.LLP, ())
    assert all(v == 0 for v in component_counts(empty).values())
    assert set(component_counts(empty)) == set(Section)


def test_counts_match_label_tallies():
    profiles = tuple(
        profile_from_dict({"id": f"p{i}", "label": label, "sections": []})
        for i, label in enumerate(["LLP", "LLP", "FLP", "CLP"])
    )
    dataset = Dataset(profiles)
    assert dataset.label_counts == {Label.LLP: 2, Label.FLP: 1, Label.CLP: 1}


def test_dynamic_block_preserved_and_ignored():
    profile = profile_from_dict(FULL_RECORD)
    assert profile.dynamic == {"connections": 12, "followers": 3}
    stripped = profile.without_section(Section.SKILLS)
    assert [e.section for e in stripped.sections] == [Section.EXPERIENCES]
    assert stripped.dynamic == profile.dynamic


def test_blank_lines_skipped(tmp_path):
    path = write_lines(
        tmp_path / "d.jsonl", ['{"id":"p1","label":"LLP","sections":[]}', "", '{"id":"p2","label":"FLP","sections":[]}']
    )
    assert len(parse_dataset(path)) == 2
