import math

import pytest

from respeval.ngram_metrics import (
    EXACT,
    MISS,
    SYNONYM,
    BleuConfig,
    EbleuConfig,
    EmptyCorpusError,
    EmptyHypothesisError,
    LengthMismatchError,
    NistConfig,
    bleu,
    brevity_penalty,
    closest_ref_length,
    ebleu,
    ebleu_synonym_expand,
    modified_precision,
    nist,
    rare_reference_words,
)
from respeval.resources import LanguageResources

from helpers import make_rng, random_corpus

EXAM_QUIZ_SYNONYMS = LanguageResources(
    synonyms={"exam": frozenset({"quiz"}), "quiz": frozenset({"exam"})}
)
HYP_EXAM = ["this", "is", "a", "exam"]
REF_QUIZ = ["this", "is", "a", "quiz"]


# --- brevity penalty ----------------------------------------------------------


def test_brevity_penalty_longer_hypothesis():
    assert brevity_penalty(10, 5) == 1.0


def test_brevity_penalty_equal_lengths():
    assert brevity_penalty(5, 5) == 1.0


def test_brevity_penalty_shorter_hypothesis():
    assert brevity_penalty(5, 10) == pytest.approx(math.exp(-1), abs=1e-12)


def test_brevity_penalty_empty_hypothesis():
    with pytest.raises(EmptyHypothesisError):
        brevity_penalty(0, 3)
    assert brevity_penalty(0, 0) == 1.0


def test_closest_ref_length_ties_to_shorter():
    assert closest_ref_length(4, [3, 5]) == 3
    assert closest_ref_length(4, [5, 3]) == 3
    assert closest_ref_length(4, [2, 5]) == 5


# --- modified precision ---------------------------------------------------------


def test_modified_precision_worked_example():
    assert modified_precision(HYP_EXAM, [REF_QUIZ], 1) == 0.75


def test_modified_precision_identity():
    seq = ["v", "w", "x", "y", "z"]
    for n in range(1, 6):
        assert modified_precision(seq, [seq], n) == 1.0


def test_modified_precision_disjoint():
    assert modified_precision(["x", "y"], [["a", "b"]], 1) == 0.0


def test_modified_precision_undefined_for_short_hypothesis():
    assert modified_precision(["x"], [["x", "y"]], 2) is None


# --- BLEU ------------------------------------------------------------------------


def test_bleu_identity_corpus():
    corpus = [["the", "cat", "sat"], ["on", "the", "mat"]]
    result = bleu(corpus, [[seg] for seg in corpus])
    assert result.score == 1.0
    assert result.brevity_penalty == 1.0


def test_bleu_worked_example_unigram():
    result = bleu([HYP_EXAM], [[REF_QUIZ]], BleuConfig(max_n=1, weights=(1.0,)))
    assert result.score == pytest.approx(0.75, abs=1e-12)


def test_bleu_zero_precision_annihilates():
    result = bleu([["a", "b"]], [[["a", "c"]]], BleuConfig(max_n=2))
    assert result.precisions[0] == 0.5
    assert result.precisions[1] == 0.0
    assert result.score == 0.0


def test_bleu_smoothing_avoids_annihilation():
    result = bleu([["a", "b"]], [[["a", "c"]]], BleuConfig(max_n=2, smooth=True))
    assert result.score > 0.0


def test_bleu_short_hypothesis_excludes_order():
    # one-token corpus: order 2 undefined, order 1 carries all the weight
    result = bleu([["a"]], [[["a"]]], BleuConfig(max_n=2))
    assert result.precisions[1] is None
    assert result.score == 1.0


def test_bleu_corpus_errors():
    with pytest.raises(LengthMismatchError):
        bleu([["a"]], [])
    with pytest.raises(EmptyCorpusError):
        bleu([], [])
    with pytest.raises(EmptyCorpusError):
        bleu([[]], [[["a"]]])


def test_bleu_weight_validation():
    with pytest.raises(ValueError):
        BleuConfig(max_n=2, weights=(0.9, 0.2))
    with pytest.raises(ValueError):
        BleuConfig(max_n=2, weights=(1.2, -0.2))


def test_bleu_sentence_level_averages_segments():
    hyp = [["a", "b"], ["c", "d"]]
    refs = [[["a", "b"]], [["c", "x"]]]
    config = BleuConfig(max_n=1, sentence_level=True)
    per_segment = [bleu([h], [r], BleuConfig(max_n=1)).score for h, r in zip(hyp, refs)]
    assert bleu(hyp, refs, config).score == pytest.approx(sum(per_segment) / 2)


def test_bleu_range_and_identity_random():
    rng = make_rng(10)
    for _ in range(50):
        corpus = random_corpus(rng)
        refs = [[seg] for seg in corpus]
        assert bleu(corpus, refs).score == 1.0
        other = random_corpus(rng, max_segments=len(corpus))
        if len(other) == len(corpus):
            assert 0.0 <= bleu(other, refs[: len(other)]).score <= 1.0


def test_bleu_vocabulary_relabeling_invariance():
    rng = make_rng(11)
    for _ in range(20):
        hyp = random_corpus(rng, max_segments=6)
        ref = [[random_corpus(rng, max_segments=1, max_tokens=12)[0]] for _ in hyp]
        mapping = {w: f"w{i}" for i, w in enumerate(sorted({t for s in hyp for t in s} | {t for rs in ref for r in rs for t in r}))}
        hyp2 = [[mapping[t] for t in seg] for seg in hyp]
        ref2 = [[[mapping[t] for t in r] for r in rs] for rs in ref]
        assert bleu(hyp, ref).score == pytest.approx(bleu(hyp2, ref2).score, abs=1e-12)


# --- NIST ------------------------------------------------------------------------


def test_nist_identity_distinct_unigrams():
    # 4 distinct words, each with reference-corpus frequency 1 out of 4:
    # every matched unigram carries log2(4/1) = 2 bits, so the order-1 term
    # is the mean information 2.0 and the length factor is 1.
    seg = ["a", "b", "c", "d"]
    expected = sum(math.log2(4 / 1) for _ in seg) / 4
    assert nist([seg], [[seg]], NistConfig(max_n=1)) == pytest.approx(expected, abs=1e-12)


def test_nist_hand_evaluated_two_orders():
    # hyp = ref = "a b a": unigram counts a:2 b:1 of 3 total; bigrams ab, ba.
    seg = ["a", "b", "a"]
    info_a = math.log2(3 / 2)
    info_b = math.log2(3 / 1)
    info_ab = math.log2(2 / 1)  # count(a) / count(ab)
    info_ba = math.log2(1 / 1)  # count(b) / count(ba)
    expected = (2 * info_a + info_b) / 3 + (info_ab + info_ba) / 2
    assert nist([seg], [[seg]], NistConfig(max_n=2)) == pytest.approx(expected, abs=1e-12)


def test_nist_no_overlap_is_zero():
    assert nist([["x", "y"]], [[["a", "b"]]]) == 0.0


def test_nist_doubling_corpus_invariance():
    rng = make_rng(12)
    for _ in range(10):
        hyp = random_corpus(rng, max_segments=8)
        refs = [[random_corpus(rng, max_segments=1, max_tokens=12)[0]] for _ in hyp]
        once = nist(hyp, refs)
        doubled = nist(hyp + hyp, refs + refs)
        assert doubled == pytest.approx(once, abs=1e-9)


def test_nist_non_negative_random():
    rng = make_rng(13)
    for _ in range(30):
        hyp = random_corpus(rng, max_segments=10)
        refs = [[random_corpus(rng, max_segments=1, max_tokens=12)[0]] for _ in hyp]
        assert nist(hyp, refs) >= 0.0


def test_nist_brevity_factor_half_at_two_thirds():
    config = NistConfig()
    assert math.exp(config.brevity_beta * math.log(2 / 3) ** 2) == pytest.approx(0.5, abs=1e-12)


# --- EBLEU -----------------------------------------------------------------------


def test_synonym_expand_worked_example():
    annotated = ebleu_synonym_expand(HYP_EXAM, REF_QUIZ, EXAM_QUIZ_SYNONYMS)
    assert [a.status for a in annotated] == [EXACT, EXACT, EXACT, SYNONYM]
    assert annotated[3].token == "quiz"
    assert annotated[3].source == "exam"
    assert annotated[3].discounted


def test_synonym_expand_empty_dictionary():
    annotated = ebleu_synonym_expand(HYP_EXAM, REF_QUIZ, LanguageResources())
    assert [a.status for a in annotated] == [EXACT, EXACT, EXACT, MISS]


def test_synonym_expand_exact_beats_synonym():
    resources = LanguageResources(synonyms={"quiz": frozenset({"exam"}), "exam": frozenset({"quiz"})})
    annotated = ebleu_synonym_expand(["quiz"], ["quiz", "exam"], resources)
    assert annotated[0].status == EXACT
    assert annotated[0].token == "quiz"


def test_ebleu_worked_example():
    config = EbleuConfig(synonym_score=0.9, max_n=1, resources=EXAM_QUIZ_SYNONYMS)
    result = ebleu([HYP_EXAM], [[REF_QUIZ]], config)
    assert result.per_order_base[0] == pytest.approx(3.9 / 4, abs=1e-12)
    assert result.score == pytest.approx(0.975, abs=1e-12)


def test_ebleu_without_synonyms_is_bleu_precision():
    result = ebleu([HYP_EXAM], [[REF_QUIZ]], EbleuConfig(max_n=1))
    assert result.per_order_base[0] == pytest.approx(0.75, abs=1e-12)


def test_ebleu_identity_is_one():
    rng = make_rng(14)
    for _ in range(20):
        corpus = random_corpus(rng, max_segments=8)
        refs = [[seg] for seg in corpus]
        assert ebleu(corpus, refs).score == 1.0


def test_ebleu_equals_bleu_without_resources():
    rng = make_rng(15)
    for _ in range(50):
        hyp = random_corpus(rng, max_segments=8)
        refs = [[random_corpus(rng, max_segments=1, max_tokens=12)[0]] for _ in hyp]
        config = EbleuConfig(rare_words_score=1.0, rare_words_percent=0.0, max_n=3)
        expected = bleu(hyp, refs, BleuConfig(max_n=3)).score
        assert ebleu(hyp, refs, config).score == expected


def test_ebleu_never_below_bleu():
    rng = make_rng(16)
    resources = LanguageResources(
        synonyms={"cat": frozenset({"dog"}), "dog": frozenset({"cat"})}
    )
    for _ in range(30):
        hyp = random_corpus(rng, max_segments=6)
        refs = [[random_corpus(rng, max_segments=1, max_tokens=12)[0]] for _ in hyp]
        base = bleu(hyp, refs, BleuConfig(max_n=3)).score
        enhanced = ebleu(hyp, refs, EbleuConfig(max_n=3, resources=resources)).score
        assert enhanced >= base - 1e-12
        assert 0.0 <= enhanced <= 1.0


def test_ebleu_cumulative_is_geometric_mean():
    rng = make_rng(17)
    for _ in range(20):
        hyp = random_corpus(rng, max_segments=6, max_tokens=12)
        refs = [[random_corpus(rng, max_segments=1, max_tokens=12)[0]] for _ in hyp]
        result = ebleu(hyp, refs, EbleuConfig(max_n=4))
        defined = [b for b in result.per_order_base if b is not None]
        cums = [c for c in result.cumulative if c is not None]
        if any(b == 0 for b in defined):
            continue
        for i, cum in enumerate(cums, start=1):
            geo = math.exp(sum(math.log(b) for b in defined[:i]) / i)
            assert cum == pytest.approx(geo, abs=1e-12)


def test_rare_reference_words_trailing_fraction():
    refs = [[["common"] * 4 + ["rare"]]]
    assert rare_reference_words(refs, 0.5) == frozenset({"rare"})
    assert rare_reference_words(refs, 0.0) == frozenset()
    # frequency tie broken lexicographically: the later-sorted word is rarer
    refs = [[["alpha", "beta", "alpha", "beta", "zeta"]]]
    assert rare_reference_words(refs, 1 / 3) == frozenset({"zeta"})
    assert rare_reference_words(refs, 2 / 3) == frozenset({"zeta", "beta"})


def test_ebleu_rare_word_bonus():
    # "rare" appears once among five reference tokens; 50% of the two
    # distinct words makes exactly it rare.
    hyp = [["common", "zzz"], ["zzz", "rare"]]
    refs = [[["common", "common", "common"]], [["common", "rare"]]]
    config = EbleuConfig(rare_words_percent=0.5, rare_words_score=1.5, max_n=1)
    result = ebleu(hyp, refs, config)
    assert result.per_order_base[0] == pytest.approx((1.0 + 1.5) / 4, abs=1e-12)


def test_ebleu_rare_bonus_keeps_sentence_within_one():
    # a perfect sentence full of rare words must still cap at 1.0
    hyp = [["rare", "word"]]
    refs = [[["rare", "word"]]]
    config = EbleuConfig(rare_words_percent=1.0, rare_words_score=1.5, max_n=2)
    result = ebleu(hyp, refs, config)
    assert result.score == 1.0


def test_ebleu_sentence_level_averages_segments():
    hyp = [["a", "b"], ["c", "d"]]
    refs = [[["a", "b"]], [["c", "x"]]]
    per_segment = [ebleu([h], [r], EbleuConfig(max_n=2)).score for h, r in zip(hyp, refs)]
    config = EbleuConfig(max_n=2, sentence_level=True)
    assert ebleu(hyp, refs, config).score == pytest.approx(sum(per_segment) / 2)


def test_sentence_level_tolerates_empty_segment():
    hyp = [["a", "b"], []]
    refs = [[["a", "b"]], [["c"]]]
    assert bleu(hyp, refs, BleuConfig(max_n=1, sentence_level=True)).score == pytest.approx(0.5)
    assert ebleu(hyp, refs, EbleuConfig(max_n=1, sentence_level=True)).score == pytest.approx(0.5)


def test_ebleu_config_validation():
    with pytest.raises(ValueError):
        EbleuConfig(synonym_score=0.0)
    with pytest.raises(ValueError):
        EbleuConfig(rare_words_score=0.5)
    with pytest.raises(ValueError):
        EbleuConfig(rare_words_percent=1.5)
