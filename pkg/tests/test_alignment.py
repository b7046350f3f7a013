import numpy as np
import pytest

from _oracles import brute_force_dominant_count, double_loop_cosine_matrix
from pivotalign.alignment import (
    AlignmentProfile,
    SimilarityMatrix,
    ac_nonparallel,
    ac_parallel,
    cosine,
    language_alignment,
    layer_alignment_score,
    pool_layers,
    similarity_matrix,
)
from pivotalign.dumpio import read_dump

# mixed-dominance matrix worked out by hand: only index 0 dominates its
# row and column; index 1 loses in its row, index 2 in its column
MIXED = np.array(
    [[0.9, 0.1, 0.2],
     [0.3, 0.8, 0.85],
     [0.2, 0.4, 0.7]]
)


class TestCosine:
    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_parallel(self):
        assert cosine([1.0, 1.0], [2.0, 2.0]) == pytest.approx(1.0, abs=1e-12)

    def test_hand_value(self):
        # dot 4 over norms sqrt(5) * sqrt(5)
        assert cosine([1.0, 2.0], [2.0, 1.0]) == pytest.approx(0.8, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            cosine([1.0, 0.0], [1.0, 0.0, 0.0])

    def test_degenerate_vector_scores_zero(self):
        assert cosine([0.0, 0.0], [1.0, 0.0]) == 0.0
        assert cosine([1e-20, 0.0], [1.0, 0.0]) == 0.0


class TestSimilarityMatrix:
    def test_orthonormal_self_pair_is_identity(self):
        rows = np.eye(4, 6, dtype=np.float32)
        matrix = similarity_matrix(rows, rows)
        np.testing.assert_allclose(matrix.values, np.eye(4), atol=1e-7)

    def test_single_sentence(self):
        matrix = similarity_matrix([[1.0, 2.0]], [[2.0, 4.0]])
        assert matrix.values.shape == (1, 1)
        assert matrix.values[0, 0] == pytest.approx(1.0)

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(4, 3))
        b = rng.normal(size=(4, 3))
        expected = double_loop_cosine_matrix(a.tolist(), b.tolist())
        np.testing.assert_allclose(similarity_matrix(a, b).values, expected, atol=1e-6)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape mismatch"):
            similarity_matrix(np.ones((3, 2)), np.ones((4, 2)))

    def test_degenerate_rows_flagged_and_zeroed(self):
        a = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
        b = np.eye(3, 2)
        matrix = similarity_matrix(a, b)
        assert matrix.degenerate_rows == (1,)
        assert matrix.degenerate_cols == (2,)
        np.testing.assert_array_equal(matrix.values[1], 0.0)
        np.testing.assert_array_equal(matrix.values[:, 2], 0.0)

    def test_range_validated(self):
        with pytest.raises(ValueError, match=r"\[-1, 1\]"):
            SimilarityMatrix(values=np.array([[2.0]]))


class TestLayerScore:
    def test_diagonal_dominant(self):
        assert layer_alignment_score([[0.9, 0.1], [0.1, 0.8]]) == 1.0

    def test_ties_count_as_failure(self):
        assert layer_alignment_score(np.full((3, 3), 0.5)) == 0.0

    def test_mixed_matrix(self):
        assert layer_alignment_score(MIXED) == pytest.approx(1 / 3, rel=0)
        assert brute_force_dominant_count(MIXED.tolist()) == 1

    def test_single_element(self):
        assert layer_alignment_score([[0.2]]) == 1.0

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            layer_alignment_score(np.ones((2, 3)))

    def test_matches_brute_force_on_random_matrices(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            matrix = rng.uniform(-1, 1, size=(10, 10))
            expected = brute_force_dominant_count(matrix.tolist()) / 10
            assert layer_alignment_score(matrix) == expected

    def test_score_times_n_is_integer(self):
        rng = np.random.default_rng(5)
        for n in (1, 3, 7, 20):
            score = layer_alignment_score(rng.uniform(size=(n, n)))
            assert 0.0 <= score <= 1.0
            assert float(score * n).is_integer()


class TestInvariances:
    def cases(self, count=25, n=8, seed=23):
        rng = np.random.default_rng(seed)
        for _ in range(count):
            yield rng, rng.uniform(-1, 1, size=(n, n))

    def test_transpose_symmetry(self):
        for _, matrix in self.cases():
            assert layer_alignment_score(matrix) == layer_alignment_score(matrix.T)

    def test_joint_permutation_invariance(self):
        for rng, matrix in self.cases():
            perm = rng.permutation(matrix.shape[0])
            permuted = matrix[np.ix_(perm, perm)]
            assert layer_alignment_score(matrix) == layer_alignment_score(permuted)

    def test_monotone_transform_invariance(self):
        transforms = [np.tanh, np.exp, lambda x: x**3, lambda x: 3.0 * x + 1.0]
        for index, (_, matrix) in enumerate(self.cases()):
            transform = transforms[index % len(transforms)]
            assert layer_alignment_score(matrix) == layer_alignment_score(transform(matrix))

    def test_embedding_scale_invariance(self):
        rng = np.random.default_rng(29)
        for _ in range(25):
            a = rng.normal(size=(6, 5))
            b = rng.normal(size=(6, 5))
            base = layer_alignment_score(similarity_matrix(a, b))
            scaled = layer_alignment_score(
                similarity_matrix(a * rng.uniform(0.01, 100.0), b * rng.uniform(0.01, 100.0))
            )
            assert base == scaled

    def test_absolute_cosine_is_not_monotone_invariant(self):
        # the order-based score survives x -> x**3, the cosine means do not
        values = MIXED
        assert ac_parallel(values**3) != ac_parallel(values)
        assert ac_nonparallel(values**3) != ac_nonparallel(values)


class TestAbsoluteCosineBaselines:
    def test_parallel_identity(self):
        assert ac_parallel(np.eye(3)) == 1.0

    def test_parallel_constant(self):
        assert ac_parallel(np.full((4, 4), 0.5)) == 0.5

    def test_parallel_mixed(self):
        assert ac_parallel(MIXED) == pytest.approx(0.8, rel=0, abs=1e-15)

    def test_nonparallel_identity(self):
        assert ac_nonparallel(np.eye(2)) == 0.0

    def test_nonparallel_constant(self):
        assert ac_nonparallel(np.full((4, 4), 0.5)) == 0.5

    def test_nonparallel_mixed(self):
        expected = (0.1 + 0.2 + 0.3 + 0.85 + 0.2 + 0.4) / 6
        assert ac_nonparallel(MIXED) == pytest.approx(expected, abs=1e-15)

    def test_nonparallel_needs_two(self):
        with pytest.raises(ValueError, match="n >= 2"):
            ac_nonparallel(np.ones((1, 1)))


class TestPoolLayers:
    def test_mean(self):
        assert pool_layers([0.2, 0.4, 0.6], "mean") == pytest.approx(0.4)

    def test_max(self):
        assert pool_layers([0.2, 0.4, 0.6], "max") == 0.6

    def test_subset(self):
        scores = np.linspace(0, 1, 33)
        subset = (5, 10, 15, 20, 25)
        assert pool_layers(scores, "mean", subset) == pytest.approx(
            np.mean([scores[i] for i in subset])
        )

    def test_empty_subset_rejected(self):
        with pytest.raises(ValueError, match="empty layer set"):
            pool_layers([0.5], "mean", [])

    def test_out_of_range_subset(self):
        with pytest.raises(ValueError, match="out of range"):
            pool_layers([0.5, 0.6], "mean", [2])

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="unknown layer pooling"):
            pool_layers([0.5], "median")


class TestLanguageAlignment:
    def test_self_pair_scores_one_everywhere(self, make_sentence_dump):
        rng = np.random.default_rng(31)
        layers = [rng.normal(size=(8, 16)).astype(np.float32) for _ in range(3)]
        pivot = read_dump(make_sentence_dump(layers, language="eng_Latn"))
        lang = read_dump(make_sentence_dump(layers, language="deu_Latn", stem="deu"))
        profile = language_alignment(pivot, lang)
        assert profile.per_layer_scores == (1.0, 1.0, 1.0)
        assert profile.pooled_mean == profile.pooled_max == 1.0

    def test_crossed_rows_score_zero(self, make_sentence_dump):
        pivot_rows = np.eye(5, 8, dtype=np.float32)
        crossed = np.roll(pivot_rows, -1, axis=0)
        pivot = read_dump(make_sentence_dump([pivot_rows], language="eng_Latn"))
        lang = read_dump(make_sentence_dump([crossed], language="deu_Latn"))
        assert language_alignment(pivot, lang).per_layer_scores == (0.0,)

    def test_incomparable_dumps_rejected(self, make_sentence_dump):
        pivot = read_dump(make_sentence_dump([np.ones((2, 3), np.float32)], language="eng_Latn"))
        other = read_dump(
            make_sentence_dump(
                [np.ones((2, 3), np.float32)], language="deu_Latn", corpus_id="other"
            )
        )
        with pytest.raises(ValueError, match="not comparable.*corpus_id"):
            language_alignment(pivot, other)

    def test_sentence_pooling_mismatch_rejected(self, make_sentence_dump):
        pivot = read_dump(make_sentence_dump([np.eye(2, 3, dtype=np.float32)], language="eng_Latn"))
        lang = read_dump(
            make_sentence_dump(
                [np.eye(2, 3, dtype=np.float32)], language="deu_Latn", pooling="last_token"
            )
        )
        with pytest.raises(ValueError, match="pooled with 'last_token'"):
            language_alignment(pivot, lang)

    def test_token_dumps_are_pooled(self, make_sentence_dump, make_token_dump):
        rng = np.random.default_rng(37)
        sentences = [rng.normal(size=(t, 4)).astype(np.float32) for t in (3, 1, 5)]
        from pivotalign.pooling import pool_weighted_average

        pooled_rows = np.stack([pool_weighted_average(s) for s in sentences])
        pivot = read_dump(
            make_sentence_dump([pooled_rows], language="eng_Latn")
        )
        token_lang = read_dump(make_token_dump([sentences], language="deu_Latn"))
        profile = language_alignment(pivot, token_lang, pooling="weighted_average")
        assert profile.per_layer_scores == (1.0,)

    def test_subset_score_recorded(self, make_sentence_dump):
        rng = np.random.default_rng(41)
        layers = [rng.normal(size=(6, 8)).astype(np.float32) for _ in range(4)]
        pivot = read_dump(make_sentence_dump(layers, language="eng_Latn"))
        lang = read_dump(make_sentence_dump(layers, language="deu_Latn"))
        profile = language_alignment(pivot, lang, subset=(1, 3), layer_pool="mean")
        assert profile.layer_subset == (1, 3)
        assert profile.subset_score == pytest.approx(
            np.mean([profile.per_layer_scores[1], profile.per_layer_scores[3]])
        )

    def test_degenerate_sentences_flagged_not_fatal(self, make_sentence_dump):
        rows = np.eye(3, 4, dtype=np.float32)
        bad = rows.copy()
        bad[1] = 0.0
        pivot = read_dump(make_sentence_dump([rows], language="eng_Latn"))
        lang = read_dump(make_sentence_dump([bad], language="deu_Latn"))
        profile = language_alignment(pivot, lang)
        assert profile.degenerate == {0: (1,)}
        assert profile.per_layer_scores[0] == pytest.approx(2 / 3)

    def test_profile_mean_never_exceeds_max(self, make_sentence_dump):
        rng = np.random.default_rng(43)
        pivot_layers = [rng.normal(size=(10, 6)).astype(np.float32) for _ in range(5)]
        lang_layers = [
            (layer + rng.normal(scale=s, size=layer.shape)).astype(np.float32)
            for layer, s in zip(pivot_layers, (0.1, 0.5, 1.0, 2.0, 4.0))
        ]
        pivot = read_dump(make_sentence_dump(pivot_layers, language="eng_Latn"))
        lang = read_dump(make_sentence_dump(lang_layers, language="deu_Latn"))
        profile = language_alignment(pivot, lang)
        assert profile.pooled_mean <= profile.pooled_max
        assert all(0.0 <= s <= 1.0 for s in profile.per_layer_scores)
