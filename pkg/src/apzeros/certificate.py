"""Certificates: assembly, serialization, and independent re-verification.

A certificate stores every ball and integer the final bound rests on.  The
verifier re-checks the full inequality chain *from the stored balls alone*,
with kernel arithmetic only (no re-evaluation of the underlying sums), so a
third party can audit a certificate file without the zero table that
produced it.  A content digest over the canonical JSON (timestamp excluded)
makes silent edits detectable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

from gmpy2 import mpq

from .balls import (
    Comparison,
    RealBall,
    ball_compare,
    ball_sin,
)
from .rigor import ContourBounds, VerifiedZero

FORMAT = "apzeros-certificate/1"

# the verifier's independent anchor for the first ordinate
GAMMA1_LOW = Fraction("14.13472514")
GAMMA1_HIGH = Fraction("14.13472515")


@dataclass(frozen=True)
class Certificate:
    zero: VerifiedZero
    bounds: ContourBounds
    q0: int
    kappa_lower: RealBall
    two_kappa_lower: RealBall
    final_constant: RealBall
    gamma1: RealBall
    legacy_q0: Optional[int]
    legacy_q0_note: Optional[str]
    table_digest: str
    precision_bits: int
    rh_verified_height: Fraction
    created_at: str


def assemble_certificate(zero, bounds, q0, table, legacy_q0=None, legacy_q0_note=None,
                         prec=None):
    """Derive the density bound and final constant from a verified zero.

    ``kappa_lower`` encloses the exact rational ``q0**-N`` (the enclosure is
    what gets rounded outward); the final constant adds twice that to the
    first ordinate over pi.
    """
    prec = prec or zero.xi.prec
    one = RealBall.from_int(1, prec)
    kappa = one / RealBall.from_int(q0**bounds.N, prec)
    two_kappa = kappa + kappa
    gamma1 = table.gamma1()
    final = gamma1 / RealBall.pi(prec) + two_kappa
    return Certificate(
        zero=zero,
        bounds=bounds,
        q0=q0,
        kappa_lower=kappa,
        two_kappa_lower=two_kappa,
        final_constant=final,
        gamma1=gamma1,
        legacy_q0=legacy_q0,
        legacy_q0_note=legacy_q0_note,
        table_digest=table.source_digest,
        precision_bits=prec,
        rh_verified_height=table.rh_verified_height,
        created_at=datetime.now(timezone.utc).isoformat(),
    )


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------


def _ball_out(b):
    mid, rad = b.to_decimal_parts()
    return {"mid": mid, "rad": rad}


def _ball_in(d, prec):
    return RealBall.from_decimal_parts(d["mid"], d["rad"], prec)


def certificate_to_dict(cert):
    z, b = cert.zero, cert.bounds
    return {
        "format": FORMAT,
        "created_at": cert.created_at,
        "precision_bits": cert.precision_bits,
        "table_digest": cert.table_digest,
        "rh_verified_height": str(cert.rh_verified_height),
        "zero": {
            "re": _ball_out(z.xi.re),
            "im": _ball_out(z.xi.im),
            "center_re": _ball_out(z.center.re),
            "center_im": _ball_out(z.center.im),
            "radius_used": str(z.radius_used),
            "min_on_circle": _ball_out(z.min_on_circle),
            "tail_at_circle": _ball_out(z.tail_at_circle),
            "M": z.M,
            "winding": z.winding,
            "segments": z.segments,
        },
        "contour": {
            "x0": str(b.x0),
            "x1": str(b.x1),
            "y0": str(b.y0),
            "y1": str(b.y1),
            "N": b.N,
        },
        "bounds": {
            "alpha": _ball_out(b.alpha),
            "a": _ball_out(b.a),
            "b": _ball_out(b.b),
            "a_w": _ball_out(b.a_w),
            "b_w": _ball_out(b.b_w),
            "w_lower": _ball_out(b.w_lower),
        },
        "q0": cert.q0,
        "legacy_q0": cert.legacy_q0,
        "legacy_q0_note": cert.legacy_q0_note,
        "kappa_lower": _ball_out(cert.kappa_lower),
        "two_kappa_lower": _ball_out(cert.two_kappa_lower),
        "final_constant": _ball_out(cert.final_constant),
        "gamma1": _ball_out(cert.gamma1),
    }


def content_digest(doc):
    """Digest of the canonical JSON with volatile fields removed."""
    stripped = {k: v for k, v in doc.items() if k not in ("created_at", "content_digest")}
    canonical = json.dumps(stripped, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_certificate(cert, path):
    doc = certificate_to_dict(cert)
    doc["content_digest"] = content_digest(doc)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def read_certificate_dict(path):
    with open(path) as f:
        return json.load(f)


def certificate_from_dict(doc):
    """Rebuild a Certificate (balls bit-exact) from its JSON dict."""
    if doc.get("format") != FORMAT:
        raise ValueError(f"unknown certificate format {doc.get('format')!r}")
    prec = int(doc["precision_bits"])
    z, c, b = doc["zero"], doc["contour"], doc["bounds"]
    from .balls import ComplexBall

    zero = VerifiedZero(
        xi=ComplexBall(_ball_in(z["re"], prec), _ball_in(z["im"], prec)),
        center=ComplexBall(_ball_in(z["center_re"], prec), _ball_in(z["center_im"], prec)),
        radius_used=Fraction(z["radius_used"]),
        min_on_circle=_ball_in(z["min_on_circle"], prec),
        tail_at_circle=_ball_in(z["tail_at_circle"], prec),
        M=int(z["M"]),
        winding=int(z["winding"]),
        segments=int(z["segments"]),
    )
    bounds = ContourBounds(
        x0=Fraction(c["x0"]),
        x1=Fraction(c["x1"]),
        y0=Fraction(c["y0"]),
        y1=Fraction(c["y1"]),
        N=int(c["N"]),
        alpha=_ball_in(b["alpha"], prec),
        a=_ball_in(b["a"], prec),
        b=_ball_in(b["b"], prec),
        a_w=_ball_in(b["a_w"], prec),
        b_w=_ball_in(b["b_w"], prec),
        w_lower=_ball_in(b["w_lower"], prec),
    )
    return Certificate(
        zero=zero,
        bounds=bounds,
        q0=int(doc["q0"]),
        kappa_lower=_ball_in(doc["kappa_lower"], prec),
        two_kappa_lower=_ball_in(doc["two_kappa_lower"], prec),
        final_constant=_ball_in(doc["final_constant"], prec),
        gamma1=_ball_in(doc["gamma1"], prec),
        legacy_q0=doc.get("legacy_q0"),
        legacy_q0_note=doc.get("legacy_q0_note"),
        table_digest=doc["table_digest"],
        precision_bits=prec,
        rh_verified_height=Fraction(doc["rh_verified_height"]),
        created_at=doc.get("created_at", ""),
    )


# ---------------------------------------------------------------------------
# independent verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _q(x):
    return mpq(x)


def _qfrac(fr):
    return mpq(fr.numerator, fr.denominator)


def _inequality_sides(doc, q0, prec):
    """Left and right balls of the contour inequality, from stored balls."""
    b = doc["bounds"]
    a = _ball_in(b["a"], prec)
    a_w = _ball_in(b["a_w"], prec)
    alpha = _ball_in(b["alpha"], prec)
    bb = _ball_in(b["b"], prec)
    b_w = _ball_in(b["b_w"], prec)
    q = RealBall.from_int(q0, prec)
    pi = RealBall.pi(prec)
    two = RealBall.from_int(2, prec)
    left = two * a_w * ball_sin(pi / q) + two * pi * a / q
    right = alpha - bb - two * b_w
    return left, right


def verify_certificate_dict(doc):
    """Re-check every stored inequality; returns a list of CheckResult.

    Uses only the certificate's own balls plus exact rational arithmetic;
    the underlying sums are never re-evaluated.
    """
    checks = []

    def add(name, passed, detail=""):
        checks.append(CheckResult(name, bool(passed), detail))

    if doc.get("format") != FORMAT:
        add("format", False, f"unknown format {doc.get('format')!r}")
        return checks
    add("format", True, FORMAT)

    prec = int(doc["precision_bits"])
    z, c, b = doc["zero"], doc["contour"], doc["bounds"]

    digest_ok = doc.get("content_digest") == content_digest(doc)
    add("content-digest", digest_ok, "matches canonical JSON" if digest_ok else "MISMATCH")

    winding = int(z["winding"])
    add("winding-is-one", winding == 1, f"winding = {winding}")

    min_ball = _ball_in(z["min_on_circle"], prec)
    tail = _ball_in(z["tail_at_circle"], prec)
    gap = ball_compare(min_ball, tail)
    add(
        "rouche-gap",
        gap is Comparison.GREATER,
        f"min {float(min_ball.lower()):.6e} vs tail {float(tail.upper()):.6e}",
    )

    x0, x1 = Fraction(c["x0"]), Fraction(c["x1"])
    y0, y1 = Fraction(c["y0"]), Fraction(c["y1"])
    add("contour-width", x1 - x0 < 1, f"width {float(x1 - x0):.6f}")

    xi_re = _ball_in(z["re"], prec)
    xi_im = _ball_in(z["im"], prec)
    inside = (
        _q(xi_re.lower()) > _qfrac(x0)
        and _q(xi_re.upper()) < _qfrac(x1)
        and _q(xi_im.lower()) > _qfrac(y0)
        and _q(xi_im.upper()) < _qfrac(y1)
    )
    add("zero-inside-contour", inside)

    center_re = _ball_in(z["center_re"], prec)
    center_im = _ball_in(z["center_im"], prec)
    radius = Fraction(z["radius_used"])
    rq = _qfrac(radius)
    box_ok = (
        _q(xi_re.lower()) <= _q(center_re.mid) - _q(center_re.rad) - rq
        and _q(xi_re.upper()) >= _q(center_re.mid) + _q(center_re.rad) + rq
        and _q(xi_im.lower()) <= _q(center_im.mid) - _q(center_im.rad) - rq
        and _q(xi_im.upper()) >= _q(center_im.mid) + _q(center_im.rad) + rq
    )
    add("enclosure-covers-disc", box_ok, f"radius {float(radius):.3e}")

    w_lower = _ball_in(b["w_lower"], prec)
    add(
        "height-bound",
        _q(w_lower.mid) + _q(w_lower.rad) <= _q(xi_im.lower()) and _q(w_lower.mid) - _q(w_lower.rad) > 0,
        f"w_lower {float(w_lower.mid):.9f}",
    )

    alpha = _ball_in(b["alpha"], prec)
    bb = _ball_in(b["b"], prec)
    b_w = _ball_in(b["b_w"], prec)
    dom = ball_compare(alpha, bb + b_w + b_w)
    add(
        "alpha-dominates-tails",
        dom is Comparison.GREATER,
        f"alpha {float(alpha.lower()):.8f} vs b+2b_w {float((bb + b_w + b_w).upper()):.8f}",
    )

    q0 = int(doc["q0"])
    add("q0-range", q0 >= 2, f"q0 = {q0}")
    left, right = _inequality_sides(doc, q0, prec)
    add(
        "inequality-at-q0",
        not left.upper() > right.lower(),
        f"lhs {float(left.upper()):.6e} <= rhs {float(right.lower()):.6e}",
    )
    if q0 > 2:
        # the certified predicate must fail one step below
        left1, right1 = _inequality_sides(doc, q0 - 1, prec)
        add(
            "minimality-at-q0-minus-1",
            left1.upper() > right1.lower(),
            f"lhs {float(left1.upper()):.6e} not below rhs {float(right1.lower()):.6e}",
        )
    else:
        add("minimality-at-q0-minus-1", True, "q0 = 2 is the smallest admissible modulus")

    N = int(c["N"])
    kappa = _ball_in(doc["kappa_lower"], prec)
    two_kappa = _ball_in(doc["two_kappa_lower"], prec)
    exact_kappa = Fraction(1, q0**N)
    add(
        "kappa-arithmetic",
        kappa.contains(exact_kappa)
        and two_kappa.contains(2 * exact_kappa)
        and _q(two_kappa.mid) - _q(two_kappa.rad) > 0,
        f"q0^-N = {float(exact_kappa):.6e}",
    )

    gamma1 = _ball_in(doc["gamma1"], prec)
    g_ok = (
        _q(gamma1.mid) - _q(gamma1.rad) >= _qfrac(GAMMA1_LOW)
        and _q(gamma1.mid) + _q(gamma1.rad) <= _qfrac(GAMMA1_HIGH)
    )
    add("first-ordinate-anchor", g_ok, f"gamma1 = {float(gamma1.mid):.10f}")

    final = _ball_in(doc["final_constant"], prec)
    recomputed = gamma1 / RealBall.pi(prec) + two_kappa
    add(
        "final-constant",
        not _q(final.mid) - _q(final.rad) > _q(recomputed.mid) - _q(recomputed.rad),
        f"claims liminf >= {float(final.lower()):.12f}",
    )
    return checks


def verify_certificate_file(path):
    return verify_certificate_dict(read_certificate_dict(path))
