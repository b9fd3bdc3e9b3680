"""Command-line front end: score transcripts, compute NER accuracy, fit the
NER regression, apply a fitted model, and export the bundled tables.

Exit codes: 0 success, 1 internal/numeric failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .align_metrics import (
    EmptyReferenceError,
    MissingResourcesError,
    meteor,
    meteor_pl,
    ribes,
    ter,
)
from .fixtures import FIXTURE_NAMES, METRIC_COLUMNS, RESPONSE_COLUMN, fixture_csv, load_fixture
from .ngram_metrics import (
    BleuConfig,
    EbleuConfig,
    EmptyCorpusError,
    EmptyHypothesisError,
    LengthMismatchError,
    NistConfig,
    bleu,
    ebleu,
    nist,
)
from .ner import (
    AnnotationParseError,
    InvalidInputError,
    InvalidRecordError,
    ner_accuracy,
    parse_ner_annotations,
    reduction_rate,
)
from .resources import ResourceFormatError, load_resources
from .stats import (
    DataTable,
    DegenerateDfError,
    EliminationTrace,
    MissingPredictorError,
    RankDeficientError,
    RegressionModel,
    TableParseError,
    TooFewRowsError,
    backward_eliminate,
    predict,
)
from .textcore import TokenizerConfig, TranscriptError, check_aligned, read_segments

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

USAGE_ERRORS = (
    TranscriptError,
    ResourceFormatError,
    AnnotationParseError,
    TableParseError,
    RankDeficientError,
    TooFewRowsError,
    DegenerateDfError,
    MissingPredictorError,
    InvalidRecordError,
    InvalidInputError,
    EmptyReferenceError,
    MissingResourcesError,
    EmptyCorpusError,
    EmptyHypothesisError,
    LengthMismatchError,
    FileNotFoundError,
    IsADirectoryError,
)

METRIC_FIELDS = ("bleu", "nist", "ter", "meteor", "meteor_pl", "ebleu", "ribes")


def _round6(value: float | None) -> float | None:
    return None if value is None else round(value, 6)


def _sha256(path: str | None) -> str | None:
    if path is None:
        return None
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class MetricReport:
    """Per-segment scores (x100), corpus aggregates and a config echo."""

    config: dict
    segments: list[dict] = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)

    def to_jsonl(self) -> str:
        lines = [json.dumps({"record": "config", **self.config}, sort_keys=True)]
        for seg in self.segments:
            lines.append(json.dumps({"record": "segment", **seg}, sort_keys=True))
        lines.append(json.dumps({"record": "aggregate", **self.aggregate}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        headers = ["SEG", "BLEU", "NIST", "TER", "METEOR", "METEOR-PL", "EBLEU", "RIBES"]
        rows = []
        for seg in self.segments:
            rows.append(
                [str(seg["index"])]
                + [_fmt_cell(seg[name]) for name in METRIC_FIELDS]
            )
        rows.append(
            ["ALL"] + [_fmt_cell(self.aggregate[name]) for name in METRIC_FIELDS]
        )
        widths = [max(len(h), max(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
        out = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
        for row in rows:
            out.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        return "\n".join(out) + "\n"


def _fmt_cell(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def _score_segment(hyp, refs, resources, args) -> dict[str, float | None]:
    bleu_cfg = BleuConfig(max_n=args.max_n, smooth=args.smooth)
    ebleu_cfg = EbleuConfig(
        synonym_score=args.synonym_score,
        rare_words_percent=args.rare_words_percent,
        rare_words_score=args.rare_words_score,
        max_n=args.max_n,
        resources=resources,
    )
    if not hyp:
        scores: dict[str, float | None] = {name: 0.0 for name in METRIC_FIELDS}
        scores["ter"] = 100.0
        if resources.is_empty():
            scores["meteor_pl"] = None
        return scores
    ter_value = min(ter(hyp, ref).ter for ref in refs)
    meteor_value = max(
        meteor(hyp, ref, penalty_exponent=args.meteor_penalty_exp).score for ref in refs
    )
    if resources.is_empty():
        meteor_pl_value = None
    else:
        meteor_pl_value = max(
            meteor_pl(hyp, ref, resources, penalty_exponent=args.meteor_penalty_exp).score
            for ref in refs
        )
    ribes_value = max(
        ribes(hyp, ref, alpha=args.ribes_alpha, variant=args.ribes_variant).score for ref in refs
    )
    return {
        "bleu": bleu([hyp], [refs], bleu_cfg).score * 100.0,
        "nist": nist([hyp], [refs], NistConfig(max_n=args.nist_max_n)),
        "ter": ter_value * 100.0,
        "meteor": meteor_value * 100.0,
        "meteor_pl": None if meteor_pl_value is None else meteor_pl_value * 100.0,
        "ebleu": ebleu([hyp], [refs], ebleu_cfg).score * 100.0,
        "ribes": ribes_value * 100.0,
    }


def cmd_score(args: argparse.Namespace) -> int:
    tok_cfg = TokenizerConfig(
        lowercase=not args.no_lowercase,
        split_punctuation=args.punctuation == "split",
        strip_punctuation=args.punctuation == "strip",
    )
    hyp_corpus = read_segments(args.hypothesis, tok_cfg)
    ref_files = [read_segments(path, tok_cfg) for path in args.references]
    for segments in ref_files:
        check_aligned(len(hyp_corpus), len(segments))
    ref_corpus = [list(refs) for refs in zip(*ref_files)] if ref_files else []
    resources = load_resources(
        synonyms=args.synonyms,
        stems=args.stems,
        function_words=args.function_words,
        function_word_weight=args.function_word_weight,
    )

    config_echo = {
        "tokenizer": {
            "lowercase": tok_cfg.lowercase,
            "split_punctuation": tok_cfg.split_punctuation,
            "strip_punctuation": tok_cfg.strip_punctuation,
        },
        "max_n": args.max_n,
        "nist_max_n": args.nist_max_n,
        "nist_scheme": (
            "info = log2(count(prefix)/count(ngram)) on the reference corpus; "
            "length factor 0.5 at hyp/ref ratio 2/3"
        ),
        "sentence_level": args.sentence_level,
        "smooth": args.smooth,
        "synonym_score": args.synonym_score,
        "rare_words_percent": args.rare_words_percent,
        "rare_words_score": args.rare_words_score,
        "meteor_penalty_exp": args.meteor_penalty_exp,
        "function_word_weight": args.function_word_weight,
        "ribes_alpha": args.ribes_alpha,
        "ribes_variant": args.ribes_variant,
        "resources": {
            "synonyms_sha256": _sha256(args.synonyms),
            "stems_sha256": _sha256(args.stems),
            "function_words_sha256": _sha256(args.function_words),
        },
    }
    report = MetricReport(config=config_echo)

    per_segment: list[dict[str, float | None]] = []
    for index, (hyp, refs) in enumerate(zip(hyp_corpus, ref_corpus), start=1):
        scores = _score_segment(hyp, refs, resources, args)
        per_segment.append(scores)
        report.segments.append(
            {"index": index, **{name: _round6(scores[name]) for name in METRIC_FIELDS}}
        )

    bleu_cfg = BleuConfig(max_n=args.max_n, sentence_level=args.sentence_level, smooth=args.smooth)
    ebleu_cfg = EbleuConfig(
        synonym_score=args.synonym_score,
        rare_words_percent=args.rare_words_percent,
        rare_words_score=args.rare_words_score,
        max_n=args.max_n,
        resources=resources,
        sentence_level=args.sentence_level,
    )

    def _mean(name: str) -> float | None:
        values = [seg[name] for seg in per_segment if seg[name] is not None]
        if not values:
            return None
        return sum(values) / len(values)

    aggregate = {
        "segments": len(hyp_corpus),
        "bleu": _round6(bleu(hyp_corpus, ref_corpus, bleu_cfg).score * 100.0),
        "nist": _round6(nist(hyp_corpus, ref_corpus, NistConfig(max_n=args.nist_max_n))),
        "ter": _round6(_mean("ter")),
        "meteor": _round6(_mean("meteor")),
        "meteor_pl": _round6(_mean("meteor_pl")),
        "ebleu": _round6(ebleu(hyp_corpus, ref_corpus, ebleu_cfg).score * 100.0),
        "ribes": _round6(_mean("ribes")),
    }
    report.aggregate = aggregate

    sys.stdout.write(report.to_text())
    if args.json:
        Path(args.json).write_text(report.to_jsonl(), encoding="utf-8")
    return EXIT_OK


def cmd_ner(args: argparse.Namespace) -> int:
    records = parse_ner_annotations(args.annotations, use_chars=args.chars)
    header = f"{'ROW':>4}  {'N':>6}  {'E':>8}  {'R':>8}  {'NER%':>8}  {'RED%':>8}"
    lines = [header]
    for index, record in enumerate(records, start=1):
        accuracy = ner_accuracy(record)
        if record.original_length is not None and record.subtitle_length is not None:
            red = f"{reduction_rate(record.original_length, record.subtitle_length):8.2f}"
        else:
            red = f"{'-':>8}"
        lines.append(
            f"{index:>4}  {record.tokens:>6}  {record.weighted_edition_errors:8.2f}  "
            f"{record.recognition_errors:8.2f}  {accuracy:8.2f}  {red}"
        )
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _format_model(model: RegressionModel, stage: int, removed: str | None, alpha: float) -> str:
    rows = [("(constant)", model.coefficients[0], model.std_errors[0], None, model.t_stats[0], model.p_values[0])]
    for j, name in enumerate(model.predictors):
        rows.append(
            (
                name,
                model.coefficients[j + 1],
                model.std_errors[j + 1],
                model.standardized_betas[j],
                model.t_stats[j + 1],
                model.p_values[j + 1],
            )
        )
    width = max(len("(constant)"), max(len(name) for name in model.predictors))
    lines = [
        f"model {stage}  (adjusted R-square {model.adjusted_r2:.3f}, n = {model.n})",
        f"  {'predictor':<{width}}  {'B':>10}  {'Std. Error':>10}  {'Beta':>8}  {'t':>8}  {'Sig.':>6}",
    ]
    for name, b, se, beta, t, p in rows:
        beta_cell = f"{beta:8.3f}" if beta is not None else " " * 8
        lines.append(
            f"  {name:<{width}}  {b:10.3f}  {se:10.3f}  {beta_cell}  {t:8.3f}  {p:6.3f}"
        )
    if removed is not None:
        lines.append(f"  -> removed {removed} (highest p above alpha {alpha})")
    else:
        lines.append("  -> final model")
    return "\n".join(lines)


def _trace_to_dict(trace: EliminationTrace) -> dict:
    return {
        "alpha": trace.alpha,
        "steps": [
            {"step": s.step, "removed": s.removed, "model": s.model.to_dict()}
            for s in trace.steps
        ],
        "final_model": trace.final_model.to_dict(),
    }


def cmd_regress(args: argparse.Namespace) -> int:
    if args.fixture:
        table = load_fixture(args.fixture)
        response = args.response or RESPONSE_COLUMN
        candidates = args.candidates or list(METRIC_COLUMNS)
    else:
        if not args.csv:
            raise TableParseError("either a CSV path or --fixture is required")
        if not args.response:
            raise TableParseError("--response is required for CSV input")
        table = DataTable.from_csv(args.csv)
        response = args.response
        candidates = args.candidates or [c for c in table.columns if c != response]
    trace = backward_eliminate(table, candidates, alpha=args.alpha, response=response)
    blocks = [
        _format_model(step.model, step.step, step.removed, trace.alpha) for step in trace.steps
    ]
    final = trace.final_model
    blocks.append(
        "surviving predictors: " + ", ".join(final.predictors)
    )
    sys.stdout.write("\n\n".join(blocks) + "\n")
    if args.json:
        Path(args.json).write_text(
            json.dumps(_trace_to_dict(trace), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    payload = json.loads(Path(args.model).read_text(encoding="utf-8"))
    model_dict = payload.get("final_model", payload) if isinstance(payload, dict) else payload
    model = RegressionModel.from_dict(model_dict)
    scores: dict[str, float] = {}
    for item in args.scores:
        name, sep, value = item.partition("=")
        if not sep:
            raise TableParseError(f"score arguments look like NAME=VALUE, got {item!r}")
        try:
            scores[name] = float(value)
        except ValueError:
            raise TableParseError(f"non-numeric value for {name!r}: {value!r}") from None
    value = predict(model, scores)
    sys.stdout.write(f"{value:.4f}\n")
    return EXIT_OK


def cmd_fixture(args: argparse.Namespace) -> int:
    text = fixture_csv(args.name)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="respeval",
        description="Score re-speaking/subtitle transcripts and model NER accuracy.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for any randomized subcommand behaviour (reserved; fixed default keeps runs reproducible)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score hypothesis transcript(s) against reference(s)")
    p_score.add_argument("hypothesis", help="hypothesis transcript file (one segment per line)")
    p_score.add_argument("references", nargs="+", help="reference transcript file(s)")
    p_score.add_argument("--max-n", type=int, default=4, help="n-gram order for BLEU/EBLEU")
    p_score.add_argument("--nist-max-n", type=int, default=5, help="n-gram order for NIST")
    p_score.add_argument(
        "--sentence-level",
        action="store_true",
        help="average per-segment BLEU/EBLEU instead of pooling counts",
    )
    p_score.add_argument("--smooth", action="store_true", help="add-one smoothing for BLEU precisions")
    p_score.add_argument("--synonyms", help="synonym table: word<TAB>syn1 syn2 ...")
    p_score.add_argument("--stems", help="stem table: word<TAB>stem1 stem2 ...")
    p_score.add_argument("--function-words", help="function word list, one per line")
    p_score.add_argument("--synonym-score", type=float, default=0.9)
    p_score.add_argument("--rare-words-percent", type=float, default=0.05)
    p_score.add_argument("--rare-words-score", type=float, default=1.1)
    p_score.add_argument("--meteor-penalty-exp", type=float, default=1.0)
    p_score.add_argument("--function-word-weight", type=float, default=0.2)
    p_score.add_argument("--ribes-alpha", type=float, default=0.25)
    p_score.add_argument("--ribes-variant", choices=("nkt", "nsr"), default="nkt")
    p_score.add_argument("--no-lowercase", action="store_true", help="keep original casing")
    p_score.add_argument(
        "--punctuation",
        choices=("split", "strip", "keep"),
        default="split",
        help="split punctuation into tokens, strip it, or keep words intact",
    )
    p_score.add_argument("--json", help="write machine-readable JSONL report to this path")
    p_score.set_defaults(func=cmd_score)

    p_ner = sub.add_parser("ner", help="NER accuracy and reduction rate from an annotation CSV")
    p_ner.add_argument("annotations", help="CSV: N,minor_count,standard_count,serious_count,R_weighted")
    p_ner.add_argument(
        "--chars",
        action="store_true",
        help="reduction rate from original_chars/subtitle_chars columns instead of token columns",
    )
    p_ner.set_defaults(func=cmd_ner)

    p_regress = sub.add_parser("regress", help="backward-elimination OLS on a metrics table")
    p_regress.add_argument("csv", nargs="?", help="numeric CSV with header row (first column may be an id)")
    p_regress.add_argument("--fixture", choices=FIXTURE_NAMES, help="use a bundled table instead of a CSV")
    p_regress.add_argument("--response", help="response column name (default NER for fixtures)")
    p_regress.add_argument("--candidates", nargs="+", help="candidate predictor columns")
    p_regress.add_argument("--alpha", type=float, default=0.05, help="significance threshold")
    p_regress.add_argument("--json", help="write models and elimination trace as JSON")
    p_regress.set_defaults(func=cmd_regress)

    p_predict = sub.add_parser("predict", help="apply a fitted model to metric scores")
    p_predict.add_argument("model", help="model JSON written by `regress --json`")
    p_predict.add_argument("scores", nargs="+", help="predictor values as NAME=VALUE")
    p_predict.set_defaults(func=cmd_predict)

    p_fixture = sub.add_parser("fixture", help="emit a bundled benchmark table as CSV")
    p_fixture.add_argument("name", choices=FIXTURE_NAMES)
    p_fixture.add_argument("--out", help="write to a file instead of stdout")
    p_fixture.set_defaults(func=cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # internal/numeric failure
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
