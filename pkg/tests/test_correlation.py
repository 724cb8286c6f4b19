import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from tintforge.correlation import (
    embedding_distance_matrix,
    run_alignment_study,
    spearman_rho,
)
from tintforge.embedding import EmbeddingStore
from tintforge.errors import InputError, StoreError
from tintforge.vocab import BASIC_COLOR_NAMES

from conftest import make_random_store


class TestSpearman:
    def test_identical_is_one(self):
        x = [3.0, 1.0, 4.0, 1.5, 9.0]
        assert spearman_rho(x, x) == 1.0

    def test_reversed_is_minus_one(self):
        x = [1.0, 2.0, 3.0, 4.0, 5.0]
        assert spearman_rho(x, x[::-1]) == -1.0

    def test_four_point_hand_case(self):
        # ranks of y are (1, 3, 2, 4); Pearson of ranks = 4/5
        assert abs(spearman_rho([1, 2, 3, 4], [10, 30, 20, 40]) - 0.8) <= 1e-12

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        x, y = rng.normal(size=10), rng.normal(size=10)
        assert spearman_rho(x, y) == spearman_rho(y, x)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            spearman_rho([1.0, 2.0], [1.0])

    def test_too_short(self):
        with pytest.raises(InputError):
            spearman_rho([1.0], [1.0])

    def test_zero_rank_variance(self):
        with pytest.raises(InputError, match="variance"):
            spearman_rho([5.0, 5.0, 5.0], [1.0, 2.0, 3.0])

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=50)
    def test_monotone_transform_invariance(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=12)
        y = rng.normal(size=12)
        base = spearman_rho(x, y)
        assert spearman_rho(np.exp(x), y) == pytest.approx(base, abs=1e-12)
        assert spearman_rho(x, 3.0 * y + 7.0) == pytest.approx(base, abs=1e-12)
        assert spearman_rho(x ** 3, np.arctan(y)) == pytest.approx(base, abs=1e-12)

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=50)
    def test_matches_scipy_including_ties(self, seed):
        rng = np.random.default_rng(seed)
        # quantized values force ties; average ranks must match scipy's
        x = np.round(rng.normal(size=15), 1)
        y = np.round(rng.normal(size=15), 1)
        if np.all(x == x[0]) or np.all(y == y[0]):
            return
        expected = scipy.stats.spearmanr(x, y).statistic
        assert spearman_rho(x, y) == pytest.approx(expected, abs=1e-12)


class TestEmbeddingDistanceMatrix:
    def test_identical_vectors_zero(self):
        store = EmbeddingStore(3, {"a": np.ones(3, np.float32), "b": np.ones(3, np.float32)})
        m = embedding_distance_matrix(store, ["a", "b"])
        assert m[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_unit_cosine(self):
        store = EmbeddingStore(2, {
            "a": np.array([1, 0], np.float32), "b": np.array([0, 1], np.float32)
        })
        m = embedding_distance_matrix(store, ["a", "b"], "cosine")
        assert m[0, 1] == pytest.approx(1.0)

    def test_scalar_oracle(self):
        store = make_random_store(["a", "b", "c"], dim=5, seed=9)
        for metric in ("cosine", "euclidean"):
            m = embedding_distance_matrix(store, ["a", "b", "c"], metric)
            assert np.array_equal(m, m.T)
            assert np.array_equal(np.diag(m), np.zeros(3))
            va, vb = store.get("a").astype(float), store.get("b").astype(float)
            if metric == "euclidean":
                assert m[0, 1] == pytest.approx(np.linalg.norm(va - vb))
            else:
                expected = 1 - va @ vb / (np.linalg.norm(va) * np.linalg.norm(vb))
                assert m[0, 1] == pytest.approx(expected)

    def test_missing_name(self, basics_store):
        with pytest.raises(StoreError):
            embedding_distance_matrix(basics_store, ["red", "mauve"])

    def test_unknown_metric(self, basics_store):
        with pytest.raises(StoreError):
            embedding_distance_matrix(basics_store, ["red"], "manhattan")


class TestAlignmentStudy:
    def test_lab_aligned_store_gives_rho_one(self, vocab, lab_aligned_store):
        reports = run_alignment_study(lab_aligned_store, vocab, ["lab"], metric="euclidean")
        (report,) = reports
        assert report.rho_overall == 1.0
        assert report.rho_warm == 1.0
        assert report.rho_neutral == 1.0
        assert report.rho_cool == 1.0
        assert report.rho_group_mean == 1.0

    def test_pair_counts(self, vocab, lab_aligned_store):
        (report,) = run_alignment_study(lab_aligned_store, vocab, ["lab"])
        assert report.pair_counts == {"overall": 55, "warm": 6, "neutral": 6, "cool": 3}

    def test_matrices_satisfy_invariants(self, vocab, basics_store):
        reports = run_alignment_study(basics_store, vocab)
        assert [r.space_id for r in reports] == [
            "srgb", "lab", "hsv", "ycbcr", "yuv", "cie1931"
        ]
        for report in reports:
            for matrix in (report.color_matrix, report.embedding_matrix):
                assert np.array_equal(matrix, matrix.T)
                assert np.array_equal(np.diag(matrix), np.zeros(11))

    def test_small_scopes_report_absent(self):
        from tintforge.correlation import _safe_rho

        # a two-term group yields one pair; two pairs force +-1: both absent
        assert _safe_rho(np.array([1.0]), np.array([2.0])) is None
        assert _safe_rho(np.array([1.0, 2.0]), np.array([2.0, 1.0])) is None
        assert _safe_rho(np.array([1.0, 2.0, 3.0]), np.array([1.0, 3.0, 2.0])) == 0.5

    def test_equidistant_embeddings_report_absent(self, vocab):
        # mutually orthogonal unit vectors: all cosine distances equal, so
        # rank variance is zero and every coefficient is undefined
        store = EmbeddingStore(11, {
            name: np.eye(11, dtype=np.float32)[i]
            for i, name in enumerate(BASIC_COLOR_NAMES)
        })
        (report,) = run_alignment_study(store, vocab, ["lab"])
        assert report.rho_overall is None
        assert report.rho_warm is None
        assert report.rho_group_mean is None

    def test_missing_basic_rejected(self, vocab):
        store = make_random_store(["red", "blue"], dim=4, seed=0)
        with pytest.raises(StoreError, match="missing"):
            run_alignment_study(store, vocab)

    def test_unknown_space_rejected(self, vocab, basics_store):
        with pytest.raises(InputError):
            run_alignment_study(basics_store, vocab, ["oklab"])

    def test_json_dict_shape(self, vocab, basics_store):
        (report,) = run_alignment_study(basics_store, vocab, ["srgb"])
        payload = report.to_json_dict()
        assert payload["space"] == "srgb"
        assert set(payload) == {
            "space", "rho_overall", "rho_group_mean", "rho_warm",
            "rho_neutral", "rho_cool", "pair_counts",
        }
