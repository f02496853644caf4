import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import family_entity_ids, family_of_entry, two_family_index
from ontosplit.embedding import (
    EmbeddingModel,
    HyperParams,
    key_vector,
    pair_loss,
    save_model,
    train_embeddings,
)
from ontosplit.lexindex import IndexEntry, LexicalIndex, NormalizationConfig


class TestPairLoss:
    def test_inactive_hinge(self):
        assert pair_loss(1.0, [0.0], 0.05) == 0.0

    def test_tie_costs_the_margin(self):
        assert pair_loss(0.0, [0.0], 0.05) == pytest.approx(0.05)

    def test_hand_computed_sum(self):
        assert pair_loss(0.2, [0.5, -1.0], 0.05) == pytest.approx(0.35)

    @given(
        st.floats(min_value=-5, max_value=5),
        st.lists(st.floats(min_value=-5, max_value=5), min_size=1, max_size=6),
        st.floats(min_value=0, max_value=1),
    )
    def test_non_negative_and_zero_condition(self, sim_pos, sim_negs, margin):
        loss = pair_loss(sim_pos, sim_negs, margin)
        assert loss >= 0.0
        if sim_pos >= margin + max(sim_negs):
            # the comparison and the hinge may round differently at ulp scale
            assert loss <= 1e-9
        if loss == 0.0:
            assert sim_pos >= margin + max(sim_negs) - 1e-12


class TestHyperParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"dim": 0},
            {"epochs": -1},
            {"learning_rate": 0.0},
            {"negatives_per_positive": 0},
            {"margin": -0.1},
            {"negative_pool": "elsewhere"},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            HyperParams(**kwargs)

    def test_zero_epochs_allowed(self):
        assert HyperParams(epochs=0).epochs == 0


class TestTraining:
    def test_empty_index_rejected(self):
        empty = LexicalIndex((), NormalizationConfig())
        with pytest.raises(ValueError):
            train_embeddings(empty, HyperParams())

    def test_zero_epochs_returns_seeded_initialization(self):
        index = two_family_index()
        model = train_embeddings(index, HyperParams(dim=4, epochs=0, seed=7))
        assert model.epoch_losses == []
        rng = np.random.default_rng(7)
        expected_words = rng.uniform(-0.25, 0.25, size=model.word_matrix.shape)
        assert np.array_equal(model.word_matrix, expected_words)

    def test_same_seed_is_bitwise_identical(self):
        index = two_family_index()
        hp = HyperParams(dim=8, epochs=5, seed=3)
        first = train_embeddings(index, hp)
        second = train_embeddings(index, hp)
        assert np.array_equal(first.word_matrix, second.word_matrix)
        assert np.array_equal(first.entity_matrix, second.entity_matrix)
        assert first.epoch_losses == second.epoch_losses

    def test_different_seeds_differ(self):
        index = two_family_index()
        first = train_embeddings(index, HyperParams(dim=8, epochs=2, seed=0))
        second = train_embeddings(index, HyperParams(dim=8, epochs=2, seed=1))
        assert not np.array_equal(first.word_matrix, second.word_matrix)

    def test_loss_decreases_on_separable_fixture(self):
        index = two_family_index()
        hp = HyperParams(dim=8, epochs=50, learning_rate=0.05, seed=0)
        model = train_embeddings(index, hp)
        assert model.epoch_losses[-1] < model.epoch_losses[0]

    def test_groups_separate(self):
        index = two_family_index()
        hp = HyperParams(dim=8, epochs=50, learning_rate=0.05, seed=0)
        model = train_embeddings(index, hp)
        hits = 0
        for entry in index.entries:
            vec = key_vector(model, entry.key)
            sims = model.entity_matrix @ vec
            rows = {row: eid for eid, row in model.entity_vocab.items()}
            best = rows[int(np.argmax(sims))]
            if best in family_entity_ids(family_of_entry(entry)):
                hits += 1
        assert hits >= 9  # at least 90% of the ten entries

    def test_own_positive_beats_other_group_entities(self):
        index = two_family_index()
        hp = HyperParams(dim=8, epochs=50, learning_rate=0.05, seed=0)
        model = train_embeddings(index, hp)
        rng = np.random.default_rng(17)
        hits = 0
        for entry in index.entries:
            vec = key_vector(model, entry.key)
            own = min(entry.source_ids)
            other_family = 1 - family_of_entry(entry)
            strangers = sorted(family_entity_ids(other_family))
            stranger = strangers[int(rng.integers(0, len(strangers)))]
            sim_own = vec @ model.entity_matrix[model.entity_vocab[own]]
            sim_other = vec @ model.entity_matrix[model.entity_vocab[stranger]]
            if sim_own > sim_other:
                hits += 1
        assert hits >= 9  # at least 90% of the ten entries

    def test_same_side_pool_trains(self):
        index = two_family_index()
        hp = HyperParams(dim=4, epochs=3, seed=0, negative_pool="same-side")
        model = train_embeddings(index, hp)
        assert len(model.epoch_losses) == 3

    def test_sampled_negatives_avoid_the_entry(self):
        from ontosplit.embedding import _sample_negatives

        rng = np.random.default_rng(0)
        banned = frozenset({0, 1, 2})
        rows = _sample_negatives(rng, None, 6, banned, count=50)
        assert set(rows.tolist()) <= {3, 4, 5}
        assert len(rows) == 50
        assert _sample_negatives(rng, None, 3, banned, count=2) is None
        pool = np.array([0, 1, 4])
        rows = _sample_negatives(rng, pool, 6, banned, count=20)
        assert set(rows.tolist()) == {4}


class TestGradients:
    """The update rule against central finite differences of the loss."""

    @staticmethod
    def _loss(key_vec, pos_vec, neg_vecs, margin):
        sims = [float(neg @ key_vec) for neg in neg_vecs]
        return pair_loss(float(key_vec @ pos_vec), sims, margin)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(42)
        dim, n_negs, margin, eps = 6, 3, 0.4, 1e-6
        key_vec = rng.normal(size=dim)
        pos_vec = rng.normal(size=dim) * 0.1  # keep several hinges active
        neg_vecs = rng.normal(size=(n_negs, dim))

        active = [margin - key_vec @ pos_vec + neg @ key_vec > 0 for neg in neg_vecs]
        assert any(active)
        grad_key = sum(
            (neg - pos_vec) for neg, act in zip(neg_vecs, active) if act
        )
        grad_pos = -sum(active) * key_vec

        for i in range(dim):
            bump = np.zeros(dim)
            bump[i] = eps
            numeric = (
                self._loss(key_vec + bump, pos_vec, neg_vecs, margin)
                - self._loss(key_vec - bump, pos_vec, neg_vecs, margin)
            ) / (2 * eps)
            assert numeric == pytest.approx(grad_key[i], abs=1e-5)
            numeric = (
                self._loss(key_vec, pos_vec + bump, neg_vecs, margin)
                - self._loss(key_vec, pos_vec - bump, neg_vecs, margin)
            ) / (2 * eps)
            assert numeric == pytest.approx(grad_pos[i], abs=1e-5)

    def test_small_step_against_the_gradient_reduces_loss(self):
        rng = np.random.default_rng(7)
        dim, margin, lr = 6, 0.4, 1e-3
        key_vec = rng.normal(size=dim)
        pos_vec = rng.normal(size=dim) * 0.1
        neg_vecs = rng.normal(size=(2, dim))
        before = self._loss(key_vec, pos_vec, neg_vecs, margin)
        assert before > 0
        active = [margin - key_vec @ pos_vec + neg @ key_vec > 0 for neg in neg_vecs]
        grad_key = sum((neg - pos_vec) for neg, act in zip(neg_vecs, active) if act)
        new_key = key_vec - lr * grad_key
        new_pos = pos_vec + lr * sum(active) * key_vec
        new_negs = np.array(
            [neg - lr * key_vec if act else neg for neg, act in zip(neg_vecs, active)]
        )
        assert self._loss(new_key, new_pos, new_negs, margin) < before


class TestKeyVector:
    def _model(self, rows):
        matrix = np.array(rows, dtype=float)
        vocab = {f"w{i}": i for i in range(len(rows))}
        return EmbeddingModel(vocab, {}, matrix, np.zeros((0, matrix.shape[1])),
                              matrix.shape[1], [])

    def test_single_word_is_its_vector(self):
        model = self._model([[1.0, 2.0]])
        assert np.array_equal(key_vector(model, ("w0",)), [1.0, 2.0])

    def test_opposite_vectors_cancel(self):
        model = self._model([[1.0, -3.0], [-1.0, 3.0]])
        assert np.array_equal(key_vector(model, ("w0", "w1")), [0.0, 0.0])

    def test_mean_of_three(self):
        model = self._model([[3.0, 0.0], [0.0, 3.0], [3.0, 3.0]])
        assert np.allclose(key_vector(model, ("w0", "w1", "w2")), [2.0, 2.0])

    def test_word_order_is_irrelevant(self):
        model = self._model([[1.0, 0.0], [0.0, 1.0], [5.0, 5.0]])
        forward = key_vector(model, ("w0", "w1", "w2"))
        backward = key_vector(model, ("w2", "w1", "w0"))
        assert np.array_equal(forward, backward)

    def test_unknown_word_named_in_error(self):
        model = self._model([[1.0, 0.0]])
        with pytest.raises(KeyError, match="unseen"):
            key_vector(model, ("unseen",))


def test_save_model_layout(tmp_path):
    index = two_family_index()
    model = train_embeddings(index, HyperParams(dim=3, epochs=1, seed=0))
    path = tmp_path / "model.txt"
    save_model(model, path)
    lines = path.read_text().splitlines()
    dim, n_words, n_entities = (int(x) for x in lines[0].split())
    assert (dim, n_words, n_entities) == (3, 10, 8)
    assert len(lines) == 1 + n_words + n_entities
    assert lines[1].startswith("w:")
    assert lines[1 + n_words].startswith("e:")
