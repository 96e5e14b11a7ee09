from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ehrkit.errors import ContractError, UndefinedInputError
from ehrkit.metrics.rouge import ScoreTriple
from ehrkit.metrics.semantic import (
    EmbeddingProvider,
    HashedTrigramEmbedding,
    cosine,
    semantic_score,
)
from ehrkit.metrics.text import tokenize

from .oracles.semantic_oracle import semantic_brute

PROVIDER = HashedTrigramEmbedding()

# Chosen because their hashed-trigram bucket sets are pairwise disjoint,
# which makes every cross cosine exactly zero; asserted below.
ORTHOGONAL_LEFT = ("fever", "cough")
ORTHOGONAL_RIGHT = ("flu", "burn")

# The committed oracle runs over these 20 pairs in the acceptance suite too.
FIXTURE_PAIRS = [
    ("patient has diabetes", "patient has chronic diabetes"),
    ("no known drug allergies", "allergic to penicillin"),
    ("blood pressure is elevated today", "blood pressure remains high"),
    ("history of asthma since childhood", "asthma diagnosed in childhood"),
    ("takes lisinopril daily", "daily lisinopril prescribed"),
    ("denies chest pain", "reports chest pain at night"),
    ("follow up in three months", "return visit in three months"),
    ("former smoker quit 2015", "smoking ceased nine years ago"),
    ("appendectomy in 2015 without complications", "appendix removed surgically"),
    ("influenza vaccination current", "flu shot up to date"),
    ("mild seasonal rhinitis", "severe seasonal allergies"),
    ("normal sinus rhythm on exam", "irregular heartbeat noted"),
    ("fasting glucose within range", "elevated fasting glucose"),
    ("reports improved sleep", "sleep remains poor"),
    ("exercise three times weekly", "sedentary lifestyle reported"),
    ("alcohol use occasional", "denies alcohol use"),
    ("family history of hypertension", "no relevant family history"),
    ("wound healing well", "wound shows signs of infection"),
    ("medication adherence good", "frequently misses doses"),
    ("hearing within normal limits", "mild hearing loss on left"),
]


class TestIdentityAndOrthogonality:
    def test_identical_texts_score_ones(self):
        tokens = tokenize("patient has diabetes")
        triple = semantic_score(tokens, tokens, PROVIDER)
        assert triple.recall == pytest.approx(1.0, abs=1e-9)
        assert triple.precision == pytest.approx(1.0, abs=1e-9)
        assert triple.f1 == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_sets_score_zero(self):
        left_buckets = set().union(*(PROVIDER.buckets(t) for t in ORTHOGONAL_LEFT))
        right_buckets = set().union(*(PROVIDER.buckets(t) for t in ORTHOGONAL_RIGHT))
        assert not (left_buckets & right_buckets)  # orthogonal by construction
        triple = semantic_score(ORTHOGONAL_LEFT, ORTHOGONAL_RIGHT, PROVIDER)
        assert triple == ScoreTriple(0.0, 0.0, 0.0)


class TestOracleAgreement:
    @pytest.mark.parametrize("reference,generated", FIXTURE_PAIRS)
    def test_matches_brute_force_pairwise_oracle(self, reference, generated):
        ref, gen = tokenize(reference), tokenize(generated)
        ours = semantic_score(ref, gen, PROVIDER)
        expected = semantic_brute(ref, gen, PROVIDER)
        assert ours.recall == pytest.approx(expected[0], abs=1e-9)
        assert ours.precision == pytest.approx(expected[1], abs=1e-9)
        assert ours.f1 == pytest.approx(expected[2], abs=1e-9)


class TestContracts:
    def test_empty_sequences_are_undefined(self):
        with pytest.raises(UndefinedInputError):
            semantic_score((), ("a",), PROVIDER)
        with pytest.raises(UndefinedInputError):
            semantic_score(("a",), (), PROVIDER)

    def test_zero_vector_provider_is_a_contract_error(self):
        class ZeroProvider(EmbeddingProvider):
            dimension = 4

            def embed(self, tokens):
                return [(0.0, 0.0, 0.0, 0.0) for _ in tokens]

        with pytest.raises(ContractError):
            semantic_score(("a",), ("b",), ZeroProvider())

    def test_provider_is_deterministic_across_instances(self):
        a = HashedTrigramEmbedding().embed(("diabetes",))
        b = HashedTrigramEmbedding().embed(("diabetes",))
        assert a == b

    def test_vectors_are_unit_normalized(self):
        (vector,) = PROVIDER.embed(("hypertension",))
        assert sum(x * x for x in vector) == pytest.approx(1.0, abs=1e-12)

    def test_duality(self):
        ref, gen = tokenize("alpha beta gamma"), tokenize("beta delta")
        assert semantic_score(ref, gen, PROVIDER).recall == pytest.approx(
            semantic_score(gen, ref, PROVIDER).precision, abs=1e-12
        )


words = st.text(alphabet="abcdefgh", min_size=1, max_size=8)


class TestProperties:
    @settings(max_examples=100, deadline=None)
    @given(
        ref=st.lists(words, min_size=1, max_size=6).map(tuple),
        gen=st.lists(words, min_size=1, max_size=6).map(tuple),
    )
    def test_scores_in_unit_range_and_match_oracle(self, ref, gen):
        triple = semantic_score(ref, gen, PROVIDER)
        for value in (triple.recall, triple.precision, triple.f1):
            assert -1e-12 <= value <= 1.0 + 1e-12
        expected = semantic_brute(ref, gen, PROVIDER)
        assert triple.recall == pytest.approx(expected[0], abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(tokens=st.lists(words, min_size=1, max_size=6).map(tuple))
    def test_identity_property(self, tokens):
        triple = semantic_score(tokens, tokens, PROVIDER)
        assert triple.f1 == pytest.approx(1.0, abs=1e-9)


def test_cosine_of_identical_vector_is_one():
    (vector,) = PROVIDER.embed(("token",))
    assert cosine(vector, vector) == pytest.approx(1.0, abs=1e-12)
