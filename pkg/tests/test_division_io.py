import json

import pytest

from ontosplit.alignio import parse_alignment
from ontosplit.division import context_of, divide_task
from ontosplit.division_io import build_manifest, read_division, write_division
from ontosplit.lexindex import build_index, derive_mappings
from ontosplit.ofn import parse_ontology
from ontosplit.synth import synthetic_pair


@pytest.fixture(scope="module")
def task():
    return synthetic_pair(29, 50, 55)


@pytest.fixture(scope="module")
def division(task):
    return divide_task(task, 2, "naive", seed=42)


def _without_run(manifest: dict) -> dict:
    trimmed = dict(manifest)
    trimmed.pop("run")
    return trimmed


class TestWriteDivision:
    def test_layout(self, division, tmp_path):
        write_division(division, tmp_path / "d")
        root = tmp_path / "d"
        assert (root / "manifest.json").is_file()
        for name in ("task_001", "task_002"):
            assert (root / name / "source.ofn").is_file()
            assert (root / name / "target.ofn").is_file()
            assert (root / name / "seed_mappings.tsv").is_file()
        assert not (root / "task_003").exists()

    def test_manifest_fields(self, division, tmp_path):
        manifest = write_division(
            division, tmp_path / "d", source_path="s.ofn", target_path="t.ofn",
            invocation={"n": 2},
        )
        assert manifest["tool"]["name"] == "ontosplit"
        assert manifest["tool"]["version"]
        assert manifest["strategy"] == "naive"
        assert manifest["n"] == 2 and manifest["seed"] == 42
        assert manifest["source"] == "s.ofn" and manifest["target"] == "t.ofn"
        assert manifest["invocation"] == {"n": 2}
        assert len(manifest["tasks"]) == 2
        for task_entry in manifest["tasks"]:
            assert set(task_entry) >= {
                "dir", "cluster", "source_signature", "target_signature",
                "seed_mappings", "skipped_entries", "empty", "size_ratio",
            }
        assert manifest["size_ratio"] == pytest.approx(
            sum(t["size_ratio"] for t in manifest["tasks"])
        )
        assert "created" in manifest["run"] and "timings_ms" in manifest["run"]
        assert {"lexindex", "clustering", "module_extraction"} <= set(
            manifest["run"]["timings_ms"]
        )
        assert sorted(manifest["config"]["normalization"]["stop_words"])
        assert manifest["config"]["hyperparams"] is None

    def test_subtasks_reparse_with_subset_signatures(self, task, division, tmp_path):
        write_division(division, tmp_path / "d")
        source_iris = {e.iri for e in task.source.entities}
        target_iris = {e.iri for e in task.target.entities}
        for position, sub in enumerate(division.subtasks, start=1):
            root = tmp_path / "d" / f"task_{position:03d}"
            source = parse_ontology((root / "source.ofn").read_text())
            target = parse_ontology((root / "target.ofn").read_text())
            assert {e.iri for e in source.entities} <= source_iris
            assert {e.iri for e in target.entities} <= target_iris
            assert len(source.entities) == len(sub.source_module.signature)
            assert len(target.entities) == len(sub.target_module.signature)
            # labels are restricted to the module signature
            for entity_id in source.labels:
                assert source.entity(entity_id).iri in source_iris

    def test_seed_mappings_resolve_against_the_original_pair(
        self, task, division, tmp_path
    ):
        write_division(division, tmp_path / "d")
        for position, sub in enumerate(division.subtasks, start=1):
            text = (tmp_path / "d" / f"task_{position:03d}" / "seed_mappings.tsv").read_text()
            parsed = parse_alignment(text, task.source, task.target)
            assert parsed.unresolved == ()
            assert parsed.alignment == sub.seed_mappings

    def test_rerun_is_identical_modulo_run_block(self, task, tmp_path):
        first_division = divide_task(task, 3, "naive", seed=7)
        second_division = divide_task(task, 3, "naive", seed=7)
        first = write_division(first_division, tmp_path / "a")
        second = write_division(second_division, tmp_path / "b")
        assert _without_run(first) == _without_run(second)
        for name in ("task_001", "task_002", "task_003"):
            for filename in ("source.ofn", "target.ofn", "seed_mappings.tsv"):
                assert (tmp_path / "a" / name / filename).read_bytes() == (
                    tmp_path / "b" / name / filename
                ).read_bytes()
        a_text = json.loads((tmp_path / "a" / "manifest.json").read_text())
        assert _without_run(a_text) == _without_run(first)

    def test_single_subtask_division_equals_the_full_overlap(self, task, tmp_path):
        division = divide_task(task, 1, "naive", seed=0)
        manifest = write_division(division, tmp_path / "one")
        index = build_index(task.source, task.target, division.config)
        candidates, _ = derive_mappings(index.entries)
        left, right = context_of(candidates, task.source, task.target)
        (entry,) = manifest["tasks"]
        assert entry["source_signature"] == len(left.signature)
        assert entry["target_signature"] == len(right.signature)


class TestReadDivision:
    def test_round_trip(self, division, tmp_path):
        write_division(division, tmp_path / "d")
        loaded = read_division(tmp_path / "d")
        assert loaded.manifest["n"] == 2
        assert len(loaded.subtasks) == 2
        assert loaded.subtasks[0].directory == "task_001"
        assert len(loaded.subtasks[0].source.entities) == len(
            division.subtasks[0].source_module.signature
        )

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="manifest"):
            read_division(tmp_path)


def test_build_manifest_records_hyperparams_for_embedding(task):
    from ontosplit.embedding import HyperParams

    division = divide_task(
        task, 2, "embedding", seed=1, hyperparams=HyperParams(dim=8, epochs=2)
    )
    manifest = build_manifest(division)
    hyper = manifest["config"]["hyperparams"]
    assert hyper["dim"] == 8 and hyper["epochs"] == 2
    assert "training" in division.timings_ms
