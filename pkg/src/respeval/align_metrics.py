"""Alignment-based metrics: TER, METEOR (with pluggable language resources,
which is all the Polish-adapted variant needs) and the word-order metric
RIBES with its rank-correlation primitives."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .resources import LanguageResources
from .textcore import TokenSequence

_EMPTY_RESOURCES = LanguageResources()


class EmptyReferenceError(ValueError):
    """TER is undefined against an empty reference."""


class MissingResourcesError(ValueError):
    """The Polish METEOR variant was requested with an entirely empty bundle."""


class UndefinedRankStatistic(ValueError):
    """Rank correlation needs at least two distinct positions."""


# --- TER ----------------------------------------------------------------------

MAX_SHIFT_LENGTH = 10


@dataclass(frozen=True)
class TerScore:
    edits: int
    shifts: int
    ref_length: int
    ter: float


def word_levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    """Word-level edit distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        current = [i]
        for j, tok_b in enumerate(b, start=1):
            cost = 0 if tok_a == tok_b else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def multiset_edit_bound(a: Sequence[str], b: Sequence[str]) -> int:
    """Lower bound on edit distance from token-count differences alone.

    Block shifts preserve the multiset, so this bound also holds for every
    sequence reachable by shifting."""
    counts = Counter(a)
    counts.subtract(Counter(b))
    surplus = sum(v for v in counts.values() if v > 0)
    deficit = -sum(v for v in counts.values() if v < 0)
    return max(surplus, deficit)


def _shift_candidates(current: list[str], ref_blocks: set[tuple[str, ...]], max_len: int):
    for start in range(len(current)):
        for length in range(1, min(max_len, len(current) - start) + 1):
            block = tuple(current[start : start + length])
            # Contiguity means an extension of a non-reference block cannot
            # itself occur in the reference.
            if block not in ref_blocks:
                break
            remainder = current[:start] + current[start + length :]
            for pos in range(len(remainder) + 1):
                if pos == start:
                    continue
                yield remainder[:pos] + list(block) + remainder[pos:]


def ter(hyp: TokenSequence, ref: TokenSequence) -> TerScore:
    """Translation edit rate: edits / reference length.

    Edits are insertions, deletions, substitutions and block shifts at unit
    cost. Shifts are searched greedily: as long as some shift of a block (of
    up to ``MAX_SHIFT_LENGTH`` words, occurring verbatim in the reference)
    strictly reduces the word edit distance, the best such shift is applied
    and counted as one edit; the remaining edit distance is then added.
    """
    if not ref:
        raise EmptyReferenceError("reference segment is empty")
    current = list(hyp)
    distance = word_levenshtein(current, ref)
    bound = multiset_edit_bound(current, ref)
    ref_blocks = {
        tuple(ref[i : i + length])
        for length in range(1, min(MAX_SHIFT_LENGTH, len(ref)) + 1)
        for i in range(len(ref) - length + 1)
    }
    shifts = 0
    while distance > bound:
        best_distance = distance
        best_sequence = None
        for candidate in _shift_candidates(current, ref_blocks, MAX_SHIFT_LENGTH):
            d = word_levenshtein(candidate, ref)
            if d < best_distance:
                best_distance = d
                best_sequence = candidate
        if best_sequence is None:
            break
        current = best_sequence
        distance = best_distance
        shifts += 1
    edits = shifts + distance
    return TerScore(edits=edits, shifts=shifts, ref_length=len(ref), ter=edits / len(ref))


# --- METEOR ---------------------------------------------------------------------

STAGE_EXACT = "exact"
STAGE_STEM = "stem"
STAGE_SYNONYM = "synonym"


@dataclass(frozen=True)
class MeteorAlignment:
    """One-to-one word matches (hyp index, ref index, stage), sorted by
    hypothesis position, with the chunk count over the final alignment."""

    matches: tuple[tuple[int, int, str], ...]
    chunks: int
    matched_unigrams: int


def _kuhn_max_matching(candidates: dict[int, list[int]]) -> int:
    match_of_ref: dict[int, int] = {}

    def try_assign(h: int, seen: set[int]) -> bool:
        for r in candidates[h]:
            if r in seen:
                continue
            seen.add(r)
            if r not in match_of_ref or try_assign(match_of_ref[r], seen):
                match_of_ref[r] = h
                return True
        return False

    size = 0
    for h in sorted(candidates):
        if try_assign(h, set()):
            size += 1
    return size


def _crossing_delta(pair: tuple[int, int], others: list[tuple[int, int]]) -> int:
    h, r = pair
    return sum(1 for oh, orr in others if (oh - h) * (orr - r) < 0)


def _greedy_stage_matching(candidates: dict[int, list[int]]) -> list[tuple[int, int]]:
    chosen: list[tuple[int, int]] = []
    used: set[int] = set()
    for h in sorted(candidates):
        for r in candidates[h]:
            if r not in used:
                chosen.append((h, r))
                used.add(r)
                break
    return chosen


def _best_stage_matching(
    candidates: dict[int, list[int]],
    prior: list[tuple[int, int]],
    node_cap: int = 200_000,
) -> list[tuple[int, int]]:
    """Maximum-cardinality matching minimizing crossings with itself and with
    matches from earlier stages; ties fall to the lowest hyp/ref index pairs.

    Falls back to an in-order greedy matching on pathological inputs (the
    exhaustive search is capped at ``node_cap`` visited nodes).
    """
    hyp_nodes = sorted(candidates)
    if not hyp_nodes:
        return []
    target = _kuhn_max_matching(candidates)
    best: list[tuple[int, int]] | None = None
    best_crossings = math.inf
    visited = 0
    aborted = False

    def dfs(idx: int, used: set[int], chosen: list[tuple[int, int]], crossings: int) -> None:
        nonlocal best, best_crossings, visited, aborted
        if aborted:
            return
        visited += 1
        if visited > node_cap:
            aborted = True
            return
        if len(chosen) + (len(hyp_nodes) - idx) < target:
            return
        if best is not None and crossings >= best_crossings:
            return
        if idx == len(hyp_nodes):
            if len(chosen) == target:
                best = list(chosen)
                best_crossings = crossings
            return
        h = hyp_nodes[idx]
        for r in candidates[h]:
            if r in used:
                continue
            delta = _crossing_delta((h, r), chosen) + _crossing_delta((h, r), prior)
            used.add(r)
            chosen.append((h, r))
            dfs(idx + 1, used, chosen, crossings + delta)
            chosen.pop()
            used.discard(r)
        dfs(idx + 1, used, chosen, crossings)

    dfs(0, set(), [], 0)
    if best is None:
        return _greedy_stage_matching(candidates)
    return best


def _count_chunks(matches: list[tuple[int, int, str]]) -> int:
    if not matches:
        return 0
    ordered = sorted(matches)
    chunks = 1
    for (h1, r1, _), (h2, r2, _) in zip(ordered, ordered[1:]):
        if h2 != h1 + 1 or r2 != r1 + 1:
            chunks += 1
    return chunks


def meteor_align(
    hyp: TokenSequence,
    ref: TokenSequence,
    resources: LanguageResources = _EMPTY_RESOURCES,
) -> MeteorAlignment:
    """Incremental alignment: exact matches first, then stem matches, then
    synonym matches; each stage only considers words left unmatched before it."""
    predicates = (
        (STAGE_EXACT, lambda a, b: a == b),
        (STAGE_STEM, resources.share_stem),
        (STAGE_SYNONYM, resources.are_synonyms),
    )
    matched_hyp: set[int] = set()
    matched_ref: set[int] = set()
    all_matches: list[tuple[int, int, str]] = []
    for stage, predicate in predicates:
        if stage == STAGE_STEM and not resources.stems:
            continue
        if stage == STAGE_SYNONYM and not resources.synonyms:
            continue
        candidates: dict[int, list[int]] = {}
        for i, h_tok in enumerate(hyp):
            if i in matched_hyp:
                continue
            options = [
                j
                for j, r_tok in enumerate(ref)
                if j not in matched_ref and predicate(h_tok, r_tok)
            ]
            if options:
                candidates[i] = options
        prior = [(h, r) for h, r, _ in all_matches]
        for h, r in _best_stage_matching(candidates, prior):
            all_matches.append((h, r, stage))
            matched_hyp.add(h)
            matched_ref.add(r)
    ordered = tuple(sorted(all_matches))
    return MeteorAlignment(
        matches=ordered,
        chunks=_count_chunks(list(ordered)),
        matched_unigrams=len(ordered),
    )


@dataclass(frozen=True)
class MeteorScore:
    precision: float
    recall: float
    fmean: float
    penalty: float
    score: float
    penalty_exponent: float
    alignment: MeteorAlignment


def meteor(
    hyp: TokenSequence,
    ref: TokenSequence,
    resources: LanguageResources = _EMPTY_RESOURCES,
    penalty_exponent: float = 1.0,
) -> MeteorScore:
    """Harmonic mean 10PR/(R+9P) discounted by the fragmentation penalty
    0.5 * (chunks / matched)^exponent.

    When the bundle defines function words, precision and recall weight
    content words 1 and function words ``function_word_weight``.
    """
    alignment = meteor_align(hyp, ref, resources)
    matched = alignment.matched_unigrams
    if matched == 0:
        return MeteorScore(0.0, 0.0, 0.0, 0.0, 0.0, penalty_exponent, alignment)
    hyp_weights = [resources.token_weight(tok) for tok in hyp]
    ref_weights = [resources.token_weight(tok) for tok in ref]
    matched_hyp_weight = sum(hyp_weights[h] for h, _, _ in alignment.matches)
    matched_ref_weight = sum(ref_weights[r] for _, r, _ in alignment.matches)
    total_hyp = sum(hyp_weights)
    total_ref = sum(ref_weights)
    precision = matched_hyp_weight / total_hyp if total_hyp > 0 else 0.0
    recall = matched_ref_weight / total_ref if total_ref > 0 else 0.0
    denom = recall + 9.0 * precision
    fmean = (10.0 * precision * recall / denom) if denom > 0 else 0.0
    penalty = 0.5 * (alignment.chunks / matched) ** penalty_exponent
    return MeteorScore(
        precision=precision,
        recall=recall,
        fmean=fmean,
        penalty=penalty,
        score=fmean * (1.0 - penalty),
        penalty_exponent=penalty_exponent,
        alignment=alignment,
    )


def meteor_pl(
    hyp: TokenSequence,
    ref: TokenSequence,
    resources: LanguageResources,
    penalty_exponent: float = 1.0,
) -> MeteorScore:
    """METEOR parameterized by a Polish-format resource bundle (multi-stem
    matching active); requires at least one loaded resource."""
    if resources is None or resources.is_empty():
        raise MissingResourcesError(
            "the Polish variant needs synonyms, stems or function words loaded"
        )
    return meteor(hyp, ref, resources, penalty_exponent)


# --- rank statistics and RIBES -----------------------------------------------


def _check_rank_input(positions: Sequence[int]) -> None:
    if len(positions) < 2:
        raise UndefinedRankStatistic(f"need >= 2 positions, got {len(positions)}")
    if len(set(positions)) != len(positions):
        raise UndefinedRankStatistic("positions must be distinct")


def kendall_nkt(positions: Sequence[int]) -> float:
    """Kendall's tau over the position list, rescaled to [0, 1]."""
    _check_rank_input(positions)
    n = len(positions)
    pairs = n * (n - 1) // 2
    concordant = sum(
        1
        for i in range(n)
        for j in range(i + 1, n)
        if positions[j] > positions[i]
    )
    tau = (2 * concordant - pairs) / pairs
    return (tau + 1.0) / 2.0


def spearman_nsr(positions: Sequence[int]) -> float:
    """Spearman's rho over the position list, rescaled to [0, 1].

    Positions are rank-transformed first, so gaps (unaligned words skipped
    in between) do not distort the statistic.
    """
    _check_rank_input(positions)
    n = len(positions)
    order = sorted(range(n), key=lambda i: positions[i])
    rank = [0] * n
    for rnk, i in enumerate(order):
        rank[i] = rnk
    d2 = sum((rank[i] - i) ** 2 for i in range(n))
    rho = 1.0 - 6.0 * d2 / (n * (n * n - 1))
    return (rho + 1.0) / 2.0


def _ngram_positions(seq: Sequence[str], max_len: int) -> tuple[Counter, dict]:
    counts: Counter = Counter()
    first_pos: dict[tuple[str, ...], int] = {}
    for length in range(1, max_len + 1):
        for i in range(len(seq) - length + 1):
            gram = tuple(seq[i : i + length])
            counts[gram] += 1
            first_pos.setdefault(gram, i)
    return counts, first_pos


def word_rank_alignment(hyp: TokenSequence, ref: TokenSequence) -> list[int]:
    """Reference positions of hypothesis words, in hypothesis order.

    Words unique in both sides align directly; repeated words are
    disambiguated by growing left/right context n-grams until the context
    occurs exactly once in both sentences. Words whose ambiguity survives are
    left unaligned, and every reference position is used at most once.
    """
    if hyp == ref:
        return list(range(len(hyp)))
    max_len = max(len(hyp), len(ref))
    hyp_counts, _ = _ngram_positions(hyp, max_len)
    ref_counts, ref_first = _ngram_positions(ref, max_len)
    used: set[int] = set()
    worder: list[int] = []
    for i, word in enumerate(hyp):
        key = (word,)
        if ref_counts[key] == 0:
            continue
        position = None
        if hyp_counts[key] == 1 and ref_counts[key] == 1:
            position = ref_first[key]
        else:
            for window in range(1, max(i, len(hyp) - i) + 1):
                if i + window < len(hyp):
                    gram = tuple(hyp[i : i + window + 1])
                    if hyp_counts[gram] == 1 and ref_counts[gram] == 1:
                        position = ref_first[gram]
                        break
                if window <= i:
                    gram = tuple(hyp[i - window : i + 1])
                    if hyp_counts[gram] == 1 and ref_counts[gram] == 1:
                        position = ref_first[gram] + window
                        break
        if position is not None and position not in used:
            used.add(position)
            worder.append(position)
    return worder


RIBES_VARIANTS = ("nkt", "nsr")


@dataclass(frozen=True)
class RibesScore:
    nkt: float
    nsr: float
    precision: float
    alpha: float
    variant: str
    score: float


def ribes(
    hyp: TokenSequence,
    ref: TokenSequence,
    alpha: float = 0.25,
    variant: str = "nkt",
) -> RibesScore:
    """Word-order score: normalized rank correlation times P^alpha, where P is
    the fraction of hypothesis words that could be aligned.

    Fewer than two aligned words give score 0 (the correlation is undefined),
    except that identical sentences always score 1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    if variant not in RIBES_VARIANTS:
        raise ValueError(f"variant must be one of {RIBES_VARIANTS}")
    if hyp and hyp == ref:
        return RibesScore(nkt=1.0, nsr=1.0, precision=1.0, alpha=alpha, variant=variant, score=1.0)
    worder = word_rank_alignment(hyp, ref)
    if len(worder) < 2:
        return RibesScore(nkt=0.0, nsr=0.0, precision=0.0, alpha=alpha, variant=variant, score=0.0)
    nkt = kendall_nkt(worder)
    nsr = spearman_nsr(worder)
    precision = len(worder) / len(hyp)
    statistic = nkt if variant == "nkt" else nsr
    return RibesScore(
        nkt=nkt,
        nsr=nsr,
        precision=precision,
        alpha=alpha,
        variant=variant,
        score=statistic * precision**alpha,
    )
