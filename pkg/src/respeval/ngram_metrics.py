"""N-gram precision metrics: BLEU, NIST and the synonym/rare-word extension EBLEU.

Corpus scores pool clipped matches and totals across segments before dividing
(the ``sentence_level`` switch averages per-segment scores instead). All
scorers are pure functions; segments may be evaluated in parallel upstream as
long as the reduction keeps segment order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .resources import LanguageResources
from .textcore import TokenSequence, clipped_matches, ngrams


class EmptyHypothesisError(ValueError):
    """Hypothesis length is zero while the reference is not."""


class EmptyCorpusError(ValueError):
    """Corpus has no segments, or no hypothesis token at all."""


class LengthMismatchError(ValueError):
    """Hypothesis and reference corpora have different segment counts."""


def brevity_penalty(c: int, r: float) -> float:
    """Length penalty: 1 when the hypothesis is longer than the reference,
    exp(1 - r/c) when it is shorter or equal."""
    if c < 0 or r < 0:
        raise ValueError("lengths must be non-negative")
    if c == 0:
        if r == 0:
            return 1.0
        raise EmptyHypothesisError("empty hypothesis against a non-empty reference")
    if c > r:
        return 1.0
    return math.exp(1.0 - r / c)


def closest_ref_length(c: int, ref_lengths: Sequence[int]) -> int:
    """Reference length nearest to ``c``; ties resolved to the shorter one."""
    return min(ref_lengths, key=lambda rl: (abs(rl - c), rl))


def modified_precision(hyp: TokenSequence, refs: Sequence[TokenSequence], n: int) -> float | None:
    """Clipped n-gram matches over total hypothesis n-grams at order ``n``.

    Returns None (undefined) when the hypothesis is shorter than ``n``; the
    caller excludes such orders from the geometric mean.
    """
    total = len(hyp) - n + 1
    if total <= 0:
        return None
    matches = clipped_matches(ngrams(hyp, n), [ngrams(ref, n) for ref in refs])
    return matches / total


def _validate_corpora(
    hyp_corpus: Sequence[TokenSequence], ref_corpus: Sequence[Sequence[TokenSequence]]
) -> None:
    if len(hyp_corpus) != len(ref_corpus):
        raise LengthMismatchError(
            f"corpus length mismatch: {len(hyp_corpus)} hypotheses vs {len(ref_corpus)} reference sets"
        )
    if not hyp_corpus:
        raise EmptyCorpusError("empty corpus")
    if all(len(h) == 0 for h in hyp_corpus):
        raise EmptyCorpusError("every hypothesis segment is empty")
    if any(not refs for refs in ref_corpus):
        raise EmptyCorpusError("a segment has no reference")


@dataclass(frozen=True)
class BleuConfig:
    """``max_n`` orders with weights summing to one (uniform by default).

    ``smooth`` applies add-one smoothing to every defined order;
    ``sentence_level`` averages per-segment scores instead of pooling.
    """

    max_n: int = 4
    weights: tuple[float, ...] | None = None
    sentence_level: bool = False
    smooth: bool = False

    def __post_init__(self) -> None:
        if self.max_n < 1:
            raise ValueError("max_n must be >= 1")
        if self.weights is not None:
            if len(self.weights) != self.max_n:
                raise ValueError("need one weight per order")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative")
            if abs(sum(self.weights) - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")

    def resolved_weights(self) -> tuple[float, ...]:
        if self.weights is not None:
            return self.weights
        return tuple(1.0 / self.max_n for _ in range(self.max_n))


@dataclass(frozen=True)
class BleuScore:
    score: float
    brevity_penalty: float
    precisions: tuple[float | None, ...]
    hyp_length: int
    ref_length: int


def _pooled_counts(
    hyp_corpus: Sequence[TokenSequence],
    ref_corpus: Sequence[Sequence[TokenSequence]],
    max_n: int,
) -> tuple[list[int], list[int], int, int]:
    nums = [0] * max_n
    dens = [0] * max_n
    c = 0
    r = 0
    for hyp, refs in zip(hyp_corpus, ref_corpus):
        c += len(hyp)
        r += closest_ref_length(len(hyp), [len(ref) for ref in refs])
        for n in range(1, max_n + 1):
            total = len(hyp) - n + 1
            if total <= 0:
                continue
            dens[n - 1] += total
            nums[n - 1] += clipped_matches(ngrams(hyp, n), [ngrams(ref, n) for ref in refs])
    return nums, dens, c, r


def _combine(
    precisions: Sequence[float | None], weights: Sequence[float], uniform: bool
) -> float:
    defined = [(w, p) for w, p in zip(weights, precisions) if p is not None and w > 0]
    if not defined:
        return 0.0
    if any(p == 0.0 for _, p in defined):
        return 0.0
    if uniform:
        # Plain running log-mean, the same arithmetic the EBLEU cumulation
        # uses, so the two metrics coincide bit-for-bit when EBLEU's extras
        # are neutral.
        log_sum = 0.0
        for _, p in defined:
            log_sum += math.log(p)
        return math.exp(log_sum / len(defined))
    wsum = sum(w for w, _ in defined)
    return math.exp(sum(w * math.log(p) for w, p in defined) / wsum)


def bleu(
    hyp_corpus: Sequence[TokenSequence],
    ref_corpus: Sequence[Sequence[TokenSequence]],
    config: BleuConfig = BleuConfig(),
) -> BleuScore:
    """Corpus BLEU with brevity penalty; 0 when any weighted order has no match."""
    _validate_corpora(hyp_corpus, ref_corpus)
    nums, dens, c, r = _pooled_counts(hyp_corpus, ref_corpus, config.max_n)
    if config.smooth:
        nums = [n + 1 if d > 0 else n for n, d in zip(nums, dens)]
        dens = [d + 1 if d > 0 else d for d in dens]
    precisions = tuple(n / d if d > 0 else None for n, d in zip(nums, dens))
    bp = brevity_penalty(c, r)
    if config.sentence_level:
        pooled = config.__class__(max_n=config.max_n, weights=config.weights, smooth=config.smooth)
        score = sum(
            bleu([h], [refs], pooled).score if h else 0.0
            for h, refs in zip(hyp_corpus, ref_corpus)
        ) / len(hyp_corpus)
    else:
        score = bp * _combine(precisions, config.resolved_weights(), config.weights is None)
    return BleuScore(score=score, brevity_penalty=bp, precisions=precisions, hyp_length=c, ref_length=r)


# --- NIST -------------------------------------------------------------------

# Beta makes the length factor exp(beta * ln^2(c/r)) equal 0.5 at ratio 2/3.
NIST_DEFAULT_BETA = math.log(0.5) / math.log(1.5) ** 2


@dataclass(frozen=True)
class NistConfig:
    max_n: int = 5
    brevity_beta: float = NIST_DEFAULT_BETA

    def __post_init__(self) -> None:
        if self.max_n < 1:
            raise ValueError("max_n must be >= 1")


def nist(
    hyp_corpus: Sequence[TokenSequence],
    ref_corpus: Sequence[Sequence[TokenSequence]],
    config: NistConfig = NistConfig(),
) -> float:
    """Information-weighted n-gram score.

    Matched n-grams are credited with their information weight
    ``log2(count(prefix) / count(ngram))`` estimated on the reference corpus,
    so rarer reference n-grams earn more. Per order the credit is divided by
    the raw hypothesis n-gram count, orders are summed arithmetically, and the
    total is scaled by the length factor ``exp(beta * ln^2 min(c/r, 1))``.
    """
    _validate_corpora(hyp_corpus, ref_corpus)

    ref_counts: list[Counter] = [Counter() for _ in range(config.max_n + 1)]
    total_ref_tokens = 0
    for refs in ref_corpus:
        for ref in refs:
            total_ref_tokens += len(ref)
            for n in range(1, config.max_n + 1):
                ref_counts[n].update(ngrams(ref, n))

    def info(gram: tuple[str, ...]) -> float:
        n = len(gram)
        denom = ref_counts[n][gram]
        numer = ref_counts[n - 1][gram[:-1]] if n > 1 else total_ref_tokens
        return math.log2(numer / denom)

    score = 0.0
    c = 0
    r_bar = 0.0
    credits = [0.0] * config.max_n
    totals = [0] * config.max_n
    for hyp, refs in zip(hyp_corpus, ref_corpus):
        c += len(hyp)
        r_bar += sum(len(ref) for ref in refs) / len(refs)
        for n in range(1, config.max_n + 1):
            total = len(hyp) - n + 1
            if total <= 0:
                continue
            totals[n - 1] += total
            hyp_grams = ngrams(hyp, n)
            ref_grams = [ngrams(ref, n) for ref in refs]
            for gram, count in hyp_grams.items():
                matched = min(count, max(rg.get(gram, 0) for rg in ref_grams))
                if matched:
                    credits[n - 1] += matched * info(gram)
    score = sum(cr / tot for cr, tot in zip(credits, totals) if tot > 0)

    if r_bar <= 0:
        return 0.0
    ratio = min(c / r_bar, 1.0)
    factor = math.exp(config.brevity_beta * math.log(ratio) ** 2)
    return score * factor


# --- EBLEU ------------------------------------------------------------------

EXACT = "exact"
SYNONYM = "synonym"
MISS = "miss"


@dataclass(frozen=True)
class AnnotatedToken:
    """Hypothesis token after synonym expansion.

    ``token`` is the effective word used for n-gram matching (the matched
    reference word when the status is ``synonym``); ``source`` is the
    original hypothesis token.
    """

    token: str
    source: str
    status: str

    @property
    def discounted(self) -> bool:
        return self.status == SYNONYM


@dataclass(frozen=True)
class EbleuConfig:
    synonym_score: float = 0.9
    rare_words_percent: float = 0.05
    rare_words_score: float = 1.1
    max_n: int = 4
    resources: LanguageResources = field(default_factory=LanguageResources)
    sentence_level: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.synonym_score <= 1.0:
            raise ValueError("synonym_score must lie in (0, 1]")
        if not 0.0 <= self.rare_words_percent <= 1.0:
            raise ValueError("rare_words_percent must lie in [0, 1]")
        if self.rare_words_score < 1.0:
            raise ValueError("rare_words_score must be >= 1")
        if self.max_n < 1:
            raise ValueError("max_n must be >= 1")


@dataclass(frozen=True)
class EbleuScore:
    score: float
    per_order_base: tuple[float | None, ...]
    cumulative: tuple[float | None, ...]
    brevity_penalty: float
    hyp_length: int
    ref_length: int


def _annotate(
    hyp: TokenSequence, refs: Sequence[TokenSequence], resources: LanguageResources
) -> list[AnnotatedToken]:
    ref_vocab: set[str] = set()
    for ref in refs:
        ref_vocab.update(ref)
    out: list[AnnotatedToken] = []
    for tok in hyp:
        if tok in ref_vocab:
            out.append(AnnotatedToken(tok, tok, EXACT))
            continue
        syns = resources.synonyms_of(tok)
        match = None
        if syns:
            for ref in refs:
                for word in ref:
                    if word in syns:
                        match = word
                        break
                if match is not None:
                    break
        if match is not None:
            out.append(AnnotatedToken(match, tok, SYNONYM))
        else:
            out.append(AnnotatedToken(tok, tok, MISS))
    return out


def ebleu_synonym_expand(
    hyp: TokenSequence, ref: TokenSequence, resources: LanguageResources
) -> list[AnnotatedToken]:
    """Mark each hypothesis token exact / synonym / miss against ``ref``.

    An exact occurrence always wins over a synonym; synonym tokens are
    rewritten to the first matching reference word and carry the discount.
    """
    return _annotate(hyp, [ref], resources)


def rare_reference_words(
    ref_corpus: Sequence[Sequence[TokenSequence]], percent: float
) -> frozenset[str]:
    """Trailing ``percent`` of distinct reference words ranked by descending
    frequency (ties broken lexicographically)."""
    counts: Counter = Counter()
    for refs in ref_corpus:
        for ref in refs:
            counts.update(ref)
    ranked = sorted(counts, key=lambda w: (-counts[w], w))
    k = int(len(ranked) * percent)
    if k == 0:
        return frozenset()
    return frozenset(ranked[len(ranked) - k :])


def ebleu(
    hyp_corpus: Sequence[TokenSequence],
    ref_corpus: Sequence[Sequence[TokenSequence]],
    config: EbleuConfig = EbleuConfig(),
) -> EbleuScore:
    """BLEU extension: synonym matches earn ``synonym_score``, n-grams holding
    a rare reference word earn ``rare_words_score`` (once per n-gram), and the
    per-order bases combine through the running log-mean ``C_i = exp(s / i)``.

    Per-segment and per-order sums are clamped so no sentence contributes more
    than a perfect score; with empty resources and rare bonus 1 the result
    equals uniform-weight BLEU exactly.
    """
    _validate_corpora(hyp_corpus, ref_corpus)
    rare = rare_reference_words(ref_corpus, config.rare_words_percent)

    nums = [0.0] * config.max_n
    dens = [0] * config.max_n
    c = 0
    r = 0
    for hyp, refs in zip(hyp_corpus, ref_corpus):
        c += len(hyp)
        r += closest_ref_length(len(hyp), [len(ref) for ref in refs])
        annotated = _annotate(hyp, refs, config.resources)
        effective = [a.token for a in annotated]
        # A miss can never participate in a match; zero keeps it harmless.
        factors = [
            1.0 if a.status == EXACT else config.synonym_score if a.status == SYNONYM else 0.0
            for a in annotated
        ]
        for n in range(1, config.max_n + 1):
            total = len(hyp) - n + 1
            if total <= 0:
                continue
            dens[n - 1] += total
            occurrences: dict[tuple[str, ...], list[float]] = {}
            for i in range(total):
                gram = tuple(effective[i : i + n])
                weight = math.prod(factors[i : i + n])
                if any(tok in rare for tok in gram):
                    weight *= config.rare_words_score
                occurrences.setdefault(gram, []).append(weight)
            ref_grams = [ngrams(ref, n) for ref in refs]
            seg_num = 0.0
            for gram, weights in occurrences.items():
                matched = min(len(weights), max(rg.get(gram, 0) for rg in ref_grams))
                if matched:
                    weights.sort(reverse=True)
                    seg_num += sum(weights[:matched])
            nums[n - 1] += min(seg_num, total)

    bases = tuple(min(num / den, 1.0) if den > 0 else None for num, den in zip(nums, dens))
    log_sum = 0.0
    included = 0
    cumulative: list[float | None] = []
    for base in bases:
        if base is None:
            cumulative.append(None)
            continue
        log_sum += math.log(base) if base > 0 else -math.inf
        included += 1
        cumulative.append(math.exp(log_sum / included) if log_sum > -math.inf else 0.0)
    core = next((cum for cum in reversed(cumulative) if cum is not None), 0.0)
    bp = brevity_penalty(c, r)

    if config.sentence_level:
        per_segment = config.__class__(
            synonym_score=config.synonym_score,
            rare_words_percent=config.rare_words_percent,
            rare_words_score=config.rare_words_score,
            max_n=config.max_n,
            resources=config.resources,
        )
        score = sum(
            ebleu([h], [refs], per_segment).score if h else 0.0
            for h, refs in zip(hyp_corpus, ref_corpus)
        ) / len(hyp_corpus)
    else:
        score = max(0.0, min(1.0, bp * core))
    return EbleuScore(
        score=score,
        per_order_base=bases,
        cumulative=tuple(cumulative),
        brevity_penalty=bp,
        hyp_length=c,
        ref_length=r,
    )
