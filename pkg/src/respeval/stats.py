"""Ordinary least squares with inference and backward elimination.

The solver goes through a Householder QR factorization: the metric columns
fed to it are highly collinear, so conditioning matters more than raw speed.
Normal-equation inversion exists only as an independent oracle in the tests.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


class RankDeficientError(ValueError):
    """Design matrix is numerically rank deficient."""


class TooFewRowsError(ValueError):
    """Need strictly more rows than coefficients."""


class DegenerateDfError(ValueError):
    """No residual degrees of freedom left."""


class MissingPredictorError(KeyError):
    """A prediction input does not cover every model predictor."""


class TableParseError(ValueError):
    """Malformed numeric CSV input."""


RANK_PIVOT_THRESHOLD = 1e-10


# --- Student's t machinery ----------------------------------------------------


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    tiny = 1e-300
    eps = 1e-15
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def t_sf(t: float, df: int) -> float:
    """Two-sided p-value: probability(|T| >= |t|) under Student's t."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return min(1.0, regularized_incomplete_beta(df / 2.0, 0.5, x))


def adjusted_r2(r2: float, n: int, k: int) -> float:
    """1 - (1 - r2)(n - 1)/(n - k - 1); may legitimately go negative."""
    if n - k - 1 <= 0:
        raise DegenerateDfError(f"n={n}, k={k} leaves no residual degrees of freedom")
    return 1.0 - (1.0 - r2) * (n - 1) / (n - k - 1)


# --- data table ----------------------------------------------------------------


@dataclass
class DataTable:
    """Rectangular numeric table with named columns.

    ``row_ids`` holds a leading non-numeric id column when the source CSV had
    one; numeric id-like columns simply stay ordinary columns.
    """

    columns: list[str]
    rows: list[list[float]]
    response: str | None = None
    row_ids: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise TableParseError(f"row {i + 1} has {len(row)} fields, expected {width}")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list[float]:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise KeyError(f"no column named {name!r}") from None
        return [row[idx] for row in self.rows]

    @classmethod
    def from_csv(cls, source: str | Path | Iterable[str], response: str | None = None) -> "DataTable":
        if isinstance(source, (str, Path)):
            with open(source, encoding="utf-8", newline="") as handle:
                raw = list(csv.reader(handle))
        else:
            raw = list(csv.reader(source))
        raw = [row for row in raw if row and any(cell.strip() for cell in row)]
        if not raw:
            raise TableParseError("empty CSV: missing header row")
        header = [cell.strip() for cell in raw[0]]

        def numeric(cell: str) -> bool:
            try:
                float(cell)
                return True
            except ValueError:
                return False

        body = raw[1:]
        id_first = bool(body) and not all(numeric(row[0]) for row in body if row)
        columns = header[1:] if id_first else header
        row_ids: list[str] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(body, start=2):
            if len(row) != len(header):
                raise TableParseError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
            cells = row[1:] if id_first else row
            if id_first:
                row_ids.append(row[0].strip())
            try:
                rows.append([float(cell) for cell in cells])
            except ValueError as exc:
                raise TableParseError(f"line {lineno}: non-numeric value ({exc})") from None
        if response is not None and response not in columns:
            raise TableParseError(f"response column {response!r} not in {columns}")
        return cls(columns=columns, rows=rows, response=response, row_ids=row_ids)


# --- model ----------------------------------------------------------------------


@dataclass(frozen=True)
class RegressionModel:
    """Fit summary: coefficients (intercept first), inference columns and fit
    statistics, mirroring the usual B / Std. Error / Beta / t / Sig. layout."""

    response: str
    predictors: tuple[str, ...]
    coefficients: tuple[float, ...]
    std_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    p_values: tuple[float, ...]
    standardized_betas: tuple[float, ...]
    r2: float
    adjusted_r2: float
    n: int
    df_resid: int

    @property
    def intercept(self) -> float:
        return self.coefficients[0]

    def to_dict(self) -> dict:
        return {
            "response": self.response,
            "predictors": list(self.predictors),
            "coefficients": list(self.coefficients),
            "std_errors": list(self.std_errors),
            "t_stats": list(self.t_stats),
            "p_values": list(self.p_values),
            "standardized_betas": list(self.standardized_betas),
            "r2": self.r2,
            "adjusted_r2": self.adjusted_r2,
            "n": self.n,
            "df_resid": self.df_resid,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RegressionModel":
        return cls(
            response=data["response"],
            predictors=tuple(data["predictors"]),
            coefficients=tuple(data["coefficients"]),
            std_errors=tuple(data["std_errors"]),
            t_stats=tuple(data["t_stats"]),
            p_values=tuple(data["p_values"]),
            standardized_betas=tuple(data["standardized_betas"]),
            r2=data["r2"],
            adjusted_r2=data["adjusted_r2"],
            n=data["n"],
            df_resid=data["df_resid"],
        )


def ols_fit(
    table: DataTable, predictors: Sequence[str], response: str | None = None
) -> RegressionModel:
    """Least squares fit of ``response`` on ``predictors`` plus an intercept.

    Standard errors come from s^2 (X'X)^-1 with s^2 = RSS / (n - k - 1);
    p-values are two-sided under Student's t; standardized betas rescale each
    coefficient by sd(x) / sd(y).
    """
    response = response or table.response
    if response is None:
        raise ValueError("no response column specified")
    predictors = list(predictors)
    if not predictors:
        raise ValueError("need at least one predictor")
    y = np.asarray(table.column(response), dtype=float)
    n = len(y)
    k = len(predictors)
    if n <= k + 1:
        raise TooFewRowsError(f"need more than {k + 1} rows to fit {k} predictors, got {n}")
    X = np.column_stack([np.ones(n)] + [table.column(name) for name in predictors])

    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    if diag.min() < RANK_PIVOT_THRESHOLD * max(diag.max(), 1.0):
        raise RankDeficientError(
            f"design matrix is rank deficient (predictors {predictors}); "
            "remove duplicated or constant columns"
        )
    beta = np.linalg.solve(r, q.T @ y)

    fitted = X @ beta
    resid = y - fitted
    rss = float(resid @ resid)
    tss = float(((y - y.mean()) ** 2).sum())
    if tss > 0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss <= 1e-12 * max(1.0, float(y @ y)) else 0.0
    df = n - k - 1
    s2 = rss / df
    r_inv = np.linalg.solve(r, np.eye(k + 1))
    xtx_inv_diag = (r_inv * r_inv).sum(axis=1)
    se = np.sqrt(s2 * xtx_inv_diag)

    t_stats = []
    p_values = []
    for b, s in zip(beta, se):
        if s > 0:
            t = float(b / s)
        else:
            t = 0.0 if abs(b) < 1e-300 else math.copysign(math.inf, b)
        t_stats.append(t)
        p_values.append(t_sf(t, df))

    sd_y = float(np.std(y, ddof=1))
    betas_std = []
    for j, name in enumerate(predictors):
        sd_x = float(np.std(np.asarray(table.column(name)), ddof=1))
        betas_std.append(float(beta[j + 1]) * sd_x / sd_y if sd_y > 0 else 0.0)

    return RegressionModel(
        response=response,
        predictors=tuple(predictors),
        coefficients=tuple(float(b) for b in beta),
        std_errors=tuple(float(s) for s in se),
        t_stats=tuple(t_stats),
        p_values=tuple(p_values),
        standardized_betas=tuple(betas_std),
        r2=r2,
        adjusted_r2=adjusted_r2(r2, n, k),
        n=n,
        df_resid=df,
    )


@dataclass(frozen=True)
class EliminationStep:
    step: int
    model: RegressionModel
    removed: str | None


@dataclass(frozen=True)
class EliminationTrace:
    steps: tuple[EliminationStep, ...]
    alpha: float

    @property
    def final_model(self) -> RegressionModel:
        return self.steps[-1].model


def backward_eliminate(
    table: DataTable,
    candidates: Sequence[str],
    alpha: float = 0.05,
    response: str | None = None,
) -> EliminationTrace:
    """Refit repeatedly, dropping the least significant predictor.

    Each stage removes the predictor with the largest p-value above ``alpha``
    (p ties resolved by dropping the later-listed candidate); the trace keeps
    every intermediate model and stops once every survivor is significant or
    a single predictor remains.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    remaining = list(candidates)
    steps: list[EliminationStep] = []
    step = 1
    while True:
        model = ols_fit(table, remaining, response)
        worst_idx: int | None = None
        worst_p = alpha
        for j in range(len(remaining)):
            p = model.p_values[j + 1]
            if p > alpha and (worst_idx is None or p >= worst_p):
                worst_idx = j
                worst_p = p
        if worst_idx is None or len(remaining) == 1:
            steps.append(EliminationStep(step, model, None))
            break
        steps.append(EliminationStep(step, model, remaining[worst_idx]))
        remaining.pop(worst_idx)
        step += 1
    return EliminationTrace(steps=tuple(steps), alpha=alpha)


def predict(model: RegressionModel, scores: Mapping[str, float]) -> float:
    """Intercept plus the weighted sum of the supplied predictor values."""
    missing = [name for name in model.predictors if name not in scores]
    if missing:
        raise MissingPredictorError(f"missing predictor values: {missing}")
    value = model.coefficients[0]
    for name, coef in zip(model.predictors, model.coefficients[1:]):
        value += coef * scores[name]
    return value
