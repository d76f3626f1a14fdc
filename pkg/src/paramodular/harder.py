"""Elliptic eigenform records and Harder's congruence check.

The congruence b_q = q^(k-2) + a_q + q^(j+k-1) mod a prime above ell is tested
through the field norm: with c = b_q - q^(k-2) - q^(j+k-1) and a_q = g(alpha),
ell must divide N(c - g(alpha)) = Res(f, c - g) for monic f.
"""

from __future__ import annotations

import csv
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

log = logging.getLogger(__name__)

DATA_ENV = "PARAMODULAR_DATA_DIR"


class RecordParseError(ValueError):
    def __init__(self, msg, line=None, path=None):
        where = f"{path or '<input>'}:{line}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line


class RecordValidationError(RecordParseError):
    pass


# -- polynomial helpers (coefficients highest degree first) -------------------------------------


def _companion(f) -> list[list[Fraction]]:
    """Companion matrix of monic f; its eigenvalues are the roots of f."""
    d = len(f) - 1
    C = [[Fraction(0)] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = Fraction(1)
    for i in range(d):
        C[i][d - 1] = Fraction(-f[d - i])
    return C


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def _poly_at_matrix(g, C):
    """Horner evaluation of g (highest first) at a square matrix."""
    n = len(C)
    out = [[Fraction(0)] * n for _ in range(n)]
    for coeff in g:
        out = _matmul(out, C)
        for i in range(n):
            out[i][i] += Fraction(coeff)
    return out


def _det(M) -> Fraction:
    M = [list(map(Fraction, row)) for row in M]
    n = len(M)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det


def norm_of(f, h) -> Fraction:
    """N(h(alpha)) over Q(alpha) = prod over roots of h; equals Res(f, h) for monic f."""
    return _det(_poly_at_matrix(h, _companion(f)))


def trace_of(f, h) -> Fraction:
    """Sum of h over the roots of f."""
    M = _poly_at_matrix(h, _companion(f))
    return sum(M[i][i] for i in range(len(M)))


def eval_poly(f, x):
    out = 0
    for c in f:
        out = out * x + c
    return out


# -- records ------------------------------------------------------------------------------------------


@dataclass
class EigenformRecord:
    """A Galois orbit of normalised eigenforms, with a_q = g_q(alpha), f(alpha) = 0."""

    level: int
    weight: int
    label: str
    minpoly: tuple[int, ...]
    eigenvalues: dict = field(default_factory=dict)  # q -> tuple of Fractions, highest first
    congruence_prime: int | None = None
    congruence_exponent: int | None = None

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def validate(self) -> None:
        if self.degree < 1:
            raise RecordValidationError(f"{self.label}: minimal polynomial must have degree >= 1")
        if self.minpoly[0] != 1:
            raise RecordValidationError(f"{self.label}: minimal polynomial must be monic")
        for q, g in self.eigenvalues.items():
            if len(g) > self.degree:
                raise RecordValidationError(f"{self.label}: a_{q} has degree >= deg f")

    def eigenvalue_poly(self, q: int):
        if q not in self.eigenvalues:
            raise KeyError(f"record {self.label} has no eigenvalue at q={q}")
        return self.eigenvalues[q]

    def eigenvalue_trace(self, q: int) -> Fraction:
        """Sum of a_q over the Galois orbit."""
        return trace_of(self.minpoly, self.eigenvalue_poly(q))

    def rational_eigenvalue(self, q: int) -> Fraction | None:
        if self.degree != 1:
            return None
        return Fraction(eval_poly(self.eigenvalue_poly(q), -self.minpoly[1]))

    def describe(self, q: int) -> str:
        r = self.rational_eigenvalue(q)
        if r is not None:
            return str(r)
        return _poly_str(self.minpoly)


def _poly_str(f) -> str:
    d = len(f) - 1
    terms = []
    for i, c in enumerate(f):
        e = d - i
        if not c:
            continue
        mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
        mag = abs(c)
        body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


def _ints(tokens, lineno, path):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise RecordParseError(f"expected integers, got {' '.join(tokens)!r}", lineno, path) from None


def _rationals(tokens, lineno, path):
    try:
        return tuple(Fraction(t) for t in tokens)
    except (ValueError, ZeroDivisionError):
        raise RecordParseError(f"expected rationals, got {' '.join(tokens)!r}", lineno, path) from None


def parse_records(text: str, path=None) -> list[EigenformRecord]:
    records = []
    block: dict = {}
    start = None

    def flush():
        nonlocal block, start
        if not block:
            return
        for key in ("level", "weight", "label", "minpoly"):
            if key not in block:
                raise RecordParseError(f"record is missing '{key}'", start, path)
        rec = EigenformRecord(
            block["level"], block["weight"], block["label"], tuple(block["minpoly"]),
            block.get("a", {}), *block.get("ell", (None, None)),
        )
        try:
            rec.validate()
        except RecordValidationError as exc:
            raise RecordValidationError(str(exc), start, path) from None
        records.append(rec)
        block, start = {}, None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            flush()
            continue
        start = start or lineno
        key, *rest = line.split()
        if key in ("level", "weight"):
            vals = _ints(rest, lineno, path)
            if len(vals) != 1 or vals[0] <= 0:
                raise RecordParseError(f"'{key}' takes one positive integer", lineno, path)
            block[key] = vals[0]
        elif key == "label":
            if len(rest) != 1:
                raise RecordParseError("'label' takes one token", lineno, path)
            block["label"] = rest[0]
        elif key == "minpoly":
            if not rest:
                raise RecordParseError("empty minimal polynomial", lineno, path)
            block["minpoly"] = _ints(rest, lineno, path)
        elif key == "a":
            if len(rest) < 2:
                raise RecordParseError("'a' needs a prime and coefficients", lineno, path)
            q = _ints(rest[:1], lineno, path)[0]
            table = block.setdefault("a", {})
            if q in table:
                raise RecordParseError(f"duplicate eigenvalue at q={q}", lineno, path)
            table[q] = _rationals(rest[1:], lineno, path)
        elif key == "ell":
            vals = _ints(rest, lineno, path)
            if len(vals) not in (1, 2):
                raise RecordParseError("'ell' takes a prime and an optional exponent", lineno, path)
            block["ell"] = (vals[0], vals[1] if len(vals) == 2 else None)
        else:
            raise RecordParseError(f"unknown field {key!r}", lineno, path)
    flush()

    seen = set()
    for rec in records:
        key = (rec.level, rec.weight, rec.label)
        if key in seen:
            raise RecordValidationError(f"duplicate record {key}", None, path)
        seen.add(key)
    return records


def ingest_records(path) -> list[EigenformRecord]:
    path = Path(path)
    return parse_records(path.read_text(), path)


# -- data directory ---------------------------------------------------------------------------------


def _read_data(name: str, data_dir=None) -> tuple[str, str]:
    data_dir = data_dir or os.environ.get(DATA_ENV)
    if data_dir:
        p = Path(data_dir) / name
        return p.read_text(), str(p)
    return resources.files("paramodular.data").joinpath(name).read_text(), f"<bundled>/{name}"


def load_records(name: str, data_dir=None) -> list[EigenformRecord]:
    text, where = _read_data(name, data_dir)
    return parse_records(text, where)


def level1_traces(data_dir=None) -> dict[tuple[int, int], Fraction]:
    """(weight, q) -> trace of T_q on S_weight(SL_2(Z)), from the level-one records."""
    out: dict = {}
    for rec in load_records("level1.txt", data_dir):
        if rec.level != 1:
            raise RecordValidationError(f"{rec.label}: expected a level-one record")
        for q in rec.eigenvalues:
            out[(rec.weight, q)] = out.get((rec.weight, q), Fraction(0)) + rec.eigenvalue_trace(q)
    return out


@dataclass(frozen=True)
class TableRow:
    p: int
    q: int
    j: int
    k: int
    ell: int
    label: str | None


def load_table(data_dir=None) -> list[TableRow]:
    text, where = _read_data("congruence_table.csv", data_dir)
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    rows = []
    for n, rec in enumerate(csv.DictReader(lines), 2):
        try:
            label = rec["label"].strip()
            rows.append(
                TableRow(int(rec["p"]), int(rec["q"]), int(rec["j"]), int(rec["k"]), int(rec["ell"]),
                         None if label in ("", "-") else label)
            )
        except (KeyError, ValueError) as exc:
            raise RecordParseError(f"bad table row: {exc}", n, where) from None
    return rows


# -- congruence check -------------------------------------------------------------------------------


@dataclass
class CongruenceReport:
    p: int
    q: int
    j: int
    k: int
    ell: int
    b_q: Fraction | None
    residual_norm: int | None
    verdict: str  # holds | fails | vacuous | error
    label: str | None = None
    trace: Fraction | None = None
    a_q: str | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict in ("holds", "vacuous")


def congruence_shift(b_q, q: int, j: int, k: int) -> Fraction:
    """c = b_q - q^(k-2) - q^(j+k-1)."""
    return Fraction(b_q) - q ** (k - 2) - q ** (j + k - 1)


def check_congruence(record: EigenformRecord | None, b_q, p: int, q: int, j: int, k: int, ell: int) -> CongruenceReport:
    if q == p:
        raise ValueError("q must differ from the level")
    if ell <= j + 2 * k - 2:
        log.warning("ell = %d does not exceed the weight %d", ell, j + 2 * k - 2)
    label = record.label if record else None
    if p % ell == 0:
        # a prime above ell divides the level, the conjecture says nothing here
        return CongruenceReport(p, q, j, k, ell, Fraction(b_q), None, "vacuous", label)
    if record is None:
        raise ValueError("an eigenform record is needed when ell does not divide the level")
    c = congruence_shift(b_q, q, j, k)
    g = record.eigenvalue_poly(q)
    # h(x) = c - g(x)
    h = [-Fraction(x) for x in g]
    h[-1] += c
    res = norm_of(record.minpoly, h)
    if res.denominator != 1:
        raise ValueError(f"norm {res} is not integral; is a_q integral?")
    res = abs(int(res))
    verdict = "holds" if res % ell == 0 else "fails"
    return CongruenceReport(p, q, j, k, ell, Fraction(b_q), res, verdict, label, a_q=record.describe(q))


def verify_table(data_dir=None, context_for=None, rows=None) -> list[CongruenceReport]:
    """Recompute every table row through the full pipeline; row errors are reported, not raised."""
    from .trace import PrimeContext, new_eigenvalue

    contexts: dict = {}
    if context_for is None:
        def context_for(p):
            if p not in contexts:
                contexts[p] = PrimeContext(p)
            return contexts[p]

    rows = load_table(data_dir) if rows is None else rows
    records = {r.label: r for r in load_records("levelp.txt", data_dir)}
    l1 = level1_traces(data_dir)
    out = []
    for row in rows:
        try:
            rec = None
            if row.label is not None:
                if row.label not in records:
                    raise KeyError(f"no eigenform record labelled {row.label}")
                rec = records[row.label]
                if rec.level != row.p or rec.weight != row.j + 2 * row.k - 2:
                    raise ValueError(f"record {rec.label} has level {rec.level}, weight {rec.weight}")
            res = new_eigenvalue(context_for(row.p), row.q, row.j, row.k, l1)
            rep = check_congruence(rec, res.new_trace, row.p, row.q, row.j, row.k, row.ell)
            rep.trace = res.total_trace
        except Exception as exc:  # keep going, the row carries the failure
            log.error("row %s failed: %s", row, exc)
            rep = CongruenceReport(row.p, row.q, row.j, row.k, row.ell, None, None, "error", row.label, error=str(exc))
        out.append(rep)
    return out
