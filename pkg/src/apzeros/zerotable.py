"""Validated tables of zeta-zero ordinates with per-entry error bounds.

A table file is plain text: ``#``-prefixed header lines carry metadata
(``declared_abs_error``, optionally ``rh_verified_height``), every other line
holds one ordinate in decimal, optionally prefixed by its 1-based index.
Loading turns each ordinate into a ball of radius ``declared_abs_error``
around the parsed decimal and validates strict monotonicity plus the
first-ordinate anchor 14.13472514...

Tables are immutable after load and keep their original text, so serializing
reproduces the file byte-for-byte (and hence the same content digest).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from importlib import resources
from pathlib import Path

from gmpy2 import mpq

from .balls import DEFAULT_PREC, ComplexBall, RealBall, ball_sqrt

# loose sanity anchor: the first ordinate agrees with the published value
# to ten decimal places
ANCHOR_LOW = Fraction("14.13472514")
ANCHOR_HIGH = Fraction("14.13472515")

CERTIFY_MAX_ERROR = Fraction(1, 2**102)
DEFAULT_RH_HEIGHT = Fraction(3) * 10**10


class ZeroTableError(ValueError):
    pass


class TableParseError(ZeroTableError):
    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.line_no = line_no


class MonotonicityError(ZeroTableError):
    pass


class AnchorError(ZeroTableError):
    pass


class InsufficientZerosError(ZeroTableError):
    pass


@dataclass(frozen=True)
class ZetaZero:
    index: int
    ordinate: RealBall


class ZeroTable:
    """Ordered zeta-zero ordinates with a shared declared absolute error."""

    def __init__(self, zeros, declared_abs_error, source_text, path="<memory>",
                 rh_verified_height=DEFAULT_RH_HEIGHT, prec=DEFAULT_PREC):
        self.zeros = tuple(zeros)
        self.declared_abs_error = Fraction(declared_abs_error)
        self.source_text = source_text
        self.path = str(path)
        self.rh_verified_height = Fraction(rh_verified_height)
        self.prec = prec
        self.source_digest = hashlib.sha256(source_text.encode()).hexdigest()
        self._coeff_cache = {}

    def __len__(self):
        return len(self.zeros)

    @property
    def certify_grade(self):
        return self.declared_abs_error <= CERTIFY_MAX_ERROR

    def require_count(self, n):
        if n > len(self.zeros):
            raise InsufficientZerosError(
                f"need {n} zeros, table {self.path} holds {len(self.zeros)}"
            )

    def ordinate(self, n):
        """Ball for the n-th ordinate (1-based)."""
        self.require_count(n)
        return self.zeros[n - 1].ordinate

    def gamma1(self):
        return self.ordinate(1)

    def coefficients(self, prec=None):
        """Cached per-zero data: (gamma, a, |a|) balls for every table entry.

        ``a_n = 1/(1/2 + i gamma_n)`` is the coefficient and ``gamma_n`` the
        frequency of the n-th term of the truncated sum.  ``flat`` carries
        the same data as raw mpfr tuples for the evaluator's inner loop.
        """
        prec = prec or self.prec
        cache = self._coeff_cache.get(prec)
        if cache is None:
            half = RealBall.from_fraction(Fraction(1, 2), prec)
            one = RealBall.from_int(1, prec)
            gammas, coeffs, moduli = [], [], []
            for z in self.zeros:
                g = (
                    z.ordinate
                    if prec == z.ordinate.prec
                    else RealBall._make(z.ordinate.mid, z.ordinate.rad, prec)
                )
                denom = half * half + g * g
                modulus_sq_inv = one / denom
                # a = conj(1/2 + i g) / |1/2 + i g|^2
                coeffs.append(
                    ComplexBall(half * modulus_sq_inv, -(g * modulus_sq_inv))
                )
                moduli.append(ball_sqrt(modulus_sq_inv))
                gammas.append(g)
            flat = _FlatCoefficients(
                tuple(g.mid for g in gammas),
                tuple(g.rad for g in gammas),
                tuple(a.re.mid for a in coeffs),
                tuple(a.re.rad for a in coeffs),
                tuple(a.im.mid for a in coeffs),
                tuple(a.im.rad for a in coeffs),
                tuple(m.upper() for m in moduli),
            )
            cache = self._coeff_cache[prec] = _CoefficientCache(
                tuple(gammas), tuple(coeffs), tuple(moduli), flat
            )
        return cache


@dataclass(frozen=True)
class _FlatCoefficients:
    gm: tuple
    gr: tuple
    arm: tuple
    arr: tuple
    aim: tuple
    air: tuple
    amod_up: tuple


@dataclass(frozen=True)
class _CoefficientCache:
    gammas: tuple
    coeffs: tuple
    moduli: tuple
    flat: tuple


def coefficient(n, table, prec=None):
    """Coefficient and frequency of the n-th term: ``(a_n, w_n)``."""
    table.require_count(n)
    cache = table.coefficients(prec)
    return cache.coeffs[n - 1], cache.gammas[n - 1]


_KEYVAL = re.compile(r"#\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)")


def load_zero_table(path, declared_abs_error=None, prec=DEFAULT_PREC):
    """Parse and validate a zero table file.

    ``declared_abs_error`` overrides the header value when given; one of the
    two must be present.  Accepts values as Fraction, decimal string, or
    float.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ZeroTableError(f"cannot read zero table {path}: {exc}") from exc

    header_error = None
    rh_height = DEFAULT_RH_HEIGHT
    zeros = []
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _KEYVAL.match(stripped)
            if m:
                key, value = m.group(1), m.group(2)
                if key == "declared_abs_error":
                    header_error = _parse_exact(value, path, line_no)
                elif key == "rh_verified_height":
                    rh_height = _parse_exact(value, path, line_no)
            continue
        parts = stripped.split()
        if len(parts) == 1:
            idx, tok = len(zeros) + 1, parts[0]
        elif len(parts) == 2:
            try:
                idx = int(parts[0])
            except ValueError:
                raise TableParseError(path, line_no, f"bad index {parts[0]!r}")
            tok = parts[1]
        else:
            raise TableParseError(path, line_no, f"expected 1 or 2 fields, got {len(parts)}")
        if idx != len(zeros) + 1:
            raise TableParseError(
                path, line_no, f"index {idx} out of sequence (expected {len(zeros) + 1})"
            )
        try:
            Decimal(tok)
        except ArithmeticError:
            raise TableParseError(path, line_no, f"bad ordinate {tok!r}")
        zeros.append((idx, tok, line_no))

    if declared_abs_error is None:
        declared_abs_error = header_error
    if declared_abs_error is None:
        raise ZeroTableError(
            f"{path}: no declared_abs_error header and none supplied"
        )
    declared = (
        declared_abs_error
        if isinstance(declared_abs_error, Fraction)
        else Fraction(Decimal(str(declared_abs_error)))
    )
    if declared <= 0:
        raise ZeroTableError(f"declared_abs_error must be positive, got {declared}")
    if not zeros:
        raise ZeroTableError(f"{path}: no ordinates found")

    entries = []
    for idx, tok, line_no in zeros:
        ball = RealBall.from_decimal(tok, prec, extra_rad=declared)
        if not ball.mid > 0:
            raise TableParseError(path, line_no, f"ordinate {tok} not positive")
        entries.append(ZetaZero(idx, ball))

    for a, b in zip(entries, entries[1:]):
        if not a.ordinate.upper() < b.ordinate.lower():
            raise MonotonicityError(
                f"{path}: ordinates {a.index} and {b.index} not strictly increasing "
                f"as disjoint balls"
            )

    first = entries[0].ordinate
    if not (
        mpq(first.lower()) >= mpq(ANCHOR_LOW.numerator, ANCHOR_LOW.denominator)
        and mpq(first.upper()) <= mpq(ANCHOR_HIGH.numerator, ANCHOR_HIGH.denominator)
    ):
        raise AnchorError(
            f"{path}: first ordinate {first!r} fails the 14.13472514... anchor"
        )

    return ZeroTable(entries, declared, text, path, rh_height, prec)


def _parse_exact(value, path, line_no):
    try:
        return Fraction(Decimal(value))
    except ArithmeticError as exc:
        raise TableParseError(path, line_no, f"bad numeric header value {value!r}") from exc


def write_zero_table(table, path):
    """Serialize a table; reproduces the source bytes (hence the digest)."""
    Path(path).write_text(table.source_text)


def bundled_table_path(name):
    return resources.files("apzeros.data") / name


def load_bundled_search_table(prec=DEFAULT_PREC):
    return load_zero_table(bundled_table_path("zeros_search_1000.txt"), prec=prec)


def load_bundled_certify_table(prec=DEFAULT_PREC):
    return load_zero_table(bundled_table_path("zeros_certify_4528.txt"), prec=prec)
