import io

import pytest

from respeval.ner import (
    AnnotationParseError,
    ErrorSeverity,
    InvalidInputError,
    InvalidRecordError,
    NerRecord,
    ner_accuracy,
    parse_ner_annotations,
    reduction_rate,
)

from helpers import make_rng


def record(n, minor=0, standard=0, serious=0, r=0.0, **kw):
    return NerRecord(
        tokens=n,
        edition_errors=(
            (ErrorSeverity.MINOR, minor),
            (ErrorSeverity.STANDARD, standard),
            (ErrorSeverity.SERIOUS, serious),
        ),
        recognition_errors=r,
        **kw,
    )


def test_severity_weights():
    assert ErrorSeverity.MINOR.weight == 0.25
    assert ErrorSeverity.STANDARD.weight == 0.5
    assert ErrorSeverity.SERIOUS.weight == 1.0


def test_accuracy_error_free():
    assert ner_accuracy(record(100)) == 100.0


def test_accuracy_one_serious_one_recognition():
    assert ner_accuracy(record(100, serious=1, r=1)) == 98.0


def test_accuracy_weighted_mix():
    # two minor (0.5) + one standard (0.5) edition errors and R = 1
    assert ner_accuracy(record(200, minor=2, standard=1, r=1)) == 99.0


def test_accuracy_rejects_zero_tokens():
    with pytest.raises(InvalidRecordError):
        ner_accuracy(record(0))


def test_accuracy_rejects_errors_exceeding_tokens():
    with pytest.raises(InvalidRecordError):
        ner_accuracy(record(2, serious=2, r=1))


def test_accuracy_strictly_decreasing_per_error_kind():
    base = ner_accuracy(record(50, minor=1, standard=1, serious=1, r=1))
    assert ner_accuracy(record(50, minor=2, standard=1, serious=1, r=1)) < base
    assert ner_accuracy(record(50, minor=1, standard=2, serious=1, r=1)) < base
    assert ner_accuracy(record(50, minor=1, standard=1, serious=2, r=1)) < base
    assert ner_accuracy(record(50, minor=1, standard=1, serious=1, r=2)) < base


def test_accuracy_scale_invariance():
    rng = make_rng(30)
    for _ in range(100):
        n = rng.randint(20, 500)
        minor = rng.randint(0, 5)
        standard = rng.randint(0, 5)
        serious = rng.randint(0, 5)
        r = rng.randint(0, 5)
        scale = rng.randint(2, 9)
        base = ner_accuracy(record(n, minor, standard, serious, r))
        scaled = ner_accuracy(
            record(n * scale, minor * scale, standard * scale, serious * scale, r * scale)
        )
        assert scaled == pytest.approx(base, abs=1e-9)


def test_accuracy_minor_error_costs_25_over_n():
    for n in (40, 100, 250):
        delta = ner_accuracy(record(n)) - ner_accuracy(record(n, minor=1))
        assert delta == pytest.approx(25.0 / n, abs=1e-12)


def test_reduction_rate_examples():
    assert reduction_rate(100, 90) == 10.0
    assert reduction_rate(100, 100) == 0.0
    assert reduction_rate(500, 533) == pytest.approx(-6.6)


def test_reduction_rate_rejects_zero_original():
    with pytest.raises(InvalidInputError):
        reduction_rate(0, 5)


HEADER = "N,minor_count,standard_count,serious_count,R_weighted"


def test_parse_error_free_row():
    records = parse_ner_annotations(io.StringIO(f"{HEADER}\n100,0,0,0,0\n"))
    assert len(records) == 1
    assert records[0].weighted_edition_errors == 0.0
    assert records[0].recognition_errors == 0.0


def test_parse_weighted_row():
    records = parse_ner_annotations(io.StringIO(f"{HEADER}\n200,2,1,0,1\n"))
    assert records[0].weighted_edition_errors == 1.0
    assert records[0].recognition_errors == 1.0


def test_parse_rejects_zero_tokens_with_line_number():
    with pytest.raises(AnnotationParseError, match="line 2"):
        parse_ner_annotations(io.StringIO(f"{HEADER}\n0,0,0,0,0\n"))


def test_parse_requires_header():
    with pytest.raises(AnnotationParseError, match="line 1"):
        parse_ner_annotations(io.StringIO("100,0,0,0,0\n"))


def test_parse_rejects_bad_field_with_line_number():
    with pytest.raises(AnnotationParseError, match="line 3"):
        parse_ner_annotations(io.StringIO(f"{HEADER}\n100,0,0,0,0\n80,x,0,0,0\n"))


def test_parse_header_only_is_empty():
    assert parse_ner_annotations(io.StringIO(f"{HEADER}\n")) == []


def test_parse_optional_reduction_columns():
    text = f"{HEADER},original_tokens,subtitle_tokens\n100,0,0,0,0,120,100\n"
    records = parse_ner_annotations(io.StringIO(text))
    assert records[0].original_length == 120
    assert records[0].subtitle_length == 100


def test_parse_chars_columns_selected_by_flag():
    text = f"{HEADER},original_chars,subtitle_chars\n100,0,0,0,0,600,480\n"
    assert parse_ner_annotations(io.StringIO(text))[0].original_length is None
    records = parse_ner_annotations(io.StringIO(text), use_chars=True)
    assert records[0].original_length == 600
    assert records[0].subtitle_length == 480


def test_parse_rejects_unknown_column():
    with pytest.raises(AnnotationParseError, match="unknown column"):
        parse_ner_annotations(io.StringIO(f"{HEADER},bogus\n1,0,0,0,0,1\n"))


def test_parse_from_path(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text(f"{HEADER}\n50,1,0,0,0.5\n", encoding="utf-8")
    records = parse_ner_annotations(path)
    assert ner_accuracy(records[0]) == pytest.approx((50 - 0.25 - 0.5) / 50 * 100)
