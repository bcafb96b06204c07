"""Batch command-line driver: scan, propose, certify, verify, report.

Configuration comes from an optional ``key = value`` text file plus flag
overrides; every default matches the documented reproduction run.  Exit
codes are stable for scripting:

  0  success
  2  configuration or input error
  3  scan produced no candidates
  4  refinement failure (derivative enclosure contains zero)
  5  zero confirmation failure (winding/gap on the circle)
  6  contour failure (minimum inconclusive or zero outside rectangle)
  7  precision exhausted while bounding constants
  8  no admissible modulus q0
  9  I/O or serialization failure
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from .balls import InconclusiveEnclosure, PrecisionExhausted
from .certificate import (
    certificate_from_dict,
    read_certificate_dict,
    verify_certificate_dict,
    write_certificate,
)
from .rigor import (
    ContourError,
    QSolveError,
    RefinementError,
    RigorError,
    RoucheError,
    run_certification,
)
from .search import Candidate, InfeasibleContourError, SearchError, newton_scan, propose_contour, sweep_N
from .zerotable import (
    ZeroTableError,
    bundled_table_path,
    load_zero_table,
)

EXIT_CONFIG = 2
EXIT_EMPTY = 3
EXIT_REFINE = 4
EXIT_ROUCHE = 5
EXIT_CONTOUR = 6
EXIT_PRECISION = 7
EXIT_Q0 = 8
EXIT_IO = 9

# constants of the documented reproduction run, reported for comparison
REFERENCE_RUN = {
    "alpha": ">= 0.00517911",
    "a": "<= 0.0612946",
    "a_w": "<= 0.0463553",
    "b": "<= 0.00212713",
    "b_w": "<= 0.000895455",
    "q0": "537",
    "two_kappa": "> 1.867e-30",
}


@dataclass
class RunConfig:
    """Tunable knobs; defaults reproduce the documented run."""

    zero_table: str = ""
    declared_abs_error: str = ""
    t_min: float = 14600.0
    t_max: float = 14800.0
    step: float = 0.1
    y_start: float = 0.04
    y_cap: float = 0.085
    max_iter: int = 25
    n_search: int = 1000
    n_start: int = 10
    certify_m: int = 4520
    radius_exp: int = -20
    seg_len: str = "1e-6"
    precision_bits: int = 384
    segments: int = 4096
    head_order: int = 512
    workers: int = 1
    output: str = ""

    @classmethod
    def from_file(cls, path):
        cfg = cls()
        valid = {f.name: f.type for f in fields(cls)}
        for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in valid:
                raise ValueError(f"{path}:{line_no}: unknown key {key!r}")
            current = getattr(cfg, key)
            if isinstance(current, bool):
                setattr(cfg, key, value.lower() in ("1", "true", "yes"))
            elif isinstance(current, int):
                setattr(cfg, key, int(value))
            elif isinstance(current, float):
                setattr(cfg, key, float(value))
            else:
                setattr(cfg, key, value)
        return cfg


def _load_table(cfg, grade):
    path = cfg.zero_table or str(
        bundled_table_path(
            "zeros_search_1000.txt" if grade == "search" else "zeros_certify_4528.txt"
        )
    )
    err = None
    if cfg.declared_abs_error:
        err = Fraction(Decimal(cfg.declared_abs_error))
    return load_zero_table(path, declared_abs_error=err, prec=cfg.precision_bits)


def _say(msg):
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_search(cfg, args):
    table = _load_table(cfg, "search")
    cands = newton_scan(
        table,
        cfg.t_min,
        cfg.t_max,
        step=cfg.step,
        y_start=cfg.y_start,
        max_iter=cfg.max_iter,
        y_cap=cfg.y_cap,
        N=cfg.n_search,
    )
    if not cands:
        _say(f"no candidates in [{cfg.t_min}, {cfg.t_max}]")
        return EXIT_EMPTY
    out = cfg.output or "candidates.txt"
    with open(out, "w") as f:
        f.write("# re im start_t iterations\n")
        for c in cands:
            f.write(f"{c.re:.12f} {c.im:.10f} {c.start_t:.1f} {c.iterations_used}\n")
    for c in cands[:10]:
        print(f"{c.re:.12f}  {c.im:.10f}  (start {c.start_t:.1f}, {c.iterations_used} iterations)")
    if len(cands) > 10:
        print(f"... {len(cands) - 10} more")
    _say(f"wrote {len(cands)} candidates to {out}")
    return 0


def _candidate_from_args(cfg, args):
    if args.re is not None and args.im is not None:
        return Candidate(complex(args.re, args.im), args.re, 0, cfg.n_search)
    if args.candidates:
        rows = []
        for raw in Path(args.candidates).read_text().splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            rows.append(
                Candidate(
                    complex(float(parts[0]), float(parts[1])),
                    float(parts[2]) if len(parts) > 2 else float(parts[0]),
                    int(parts[3]) if len(parts) > 3 else 0,
                    cfg.n_search,
                )
            )
        if not rows:
            raise ValueError(f"no candidates in {args.candidates}")
        if args.pick >= len(rows):
            raise ValueError(f"--pick {args.pick} out of range ({len(rows)} candidates)")
        return rows[args.pick]
    raise ValueError("give a candidate: --re/--im or --candidates [--pick K]")


def cmd_propose(cfg, args):
    table = _load_table(cfg, "certify")
    cand = _candidate_from_args(cfg, args)
    if args.order:
        props = [propose_contour(cand, table, args.order)]
    else:
        props = [sweep_N(cand, table, N_start=cfg.n_start)]
    for p in props:
        print(f"N = {p.N}{'' if p.feasible else '  (infeasible)'}")
        print(f"rectangle: [{p.x0:.12f}, {p.x1:.12f}] x [{p.y0:.9f}, {p.y1:.9f}]")
        print(f"alpha ~ {p.alpha_est:.8f}  a ~ {p.a_est:.7f}  b ~ {p.b_est:.8f}")
        print(f"a_w ~ {p.aw_est:.7f}  b_w ~ {p.bw_est:.9f}")
        if p.feasible:
            print(f"q0 ~ {p.q0_est} (continuous crossing {p.q0_continuous:.1f})")
            print(f"density exponent ~ 1e{p.kappa_log10:.2f}")
    return 0


def cmd_certify(cfg, args):
    table = _load_table(cfg, "certify")
    if not table.certify_grade:
        raise ValueError(
            f"table {table.path} declares error {table.declared_abs_error}; "
            "certification requires 2^-102 or better"
        )
    cand = _candidate_from_args(cfg, args)
    contour = None
    N = args.order or None
    if args.y0 is not None or args.y1 is not None:
        if args.y0 is None or args.y1 is None or N is None:
            raise ValueError("an explicit contour needs --y0, --y1 and --order together")
        u = Fraction(cand.position.real)
        x0 = Fraction(Decimal(args.x0)) if args.x0 else u - Fraction(1, 20)
        x1 = Fraction(Decimal(args.x1)) if args.x1 else u + Fraction(1, 20)
        contour = (x0, x1, Fraction(Decimal(args.y0)), Fraction(Decimal(args.y1)))

    cert = run_certification(
        cand,
        table,
        M=cfg.certify_m,
        radius=Fraction(1, 2**-cfg.radius_exp) if cfg.radius_exp < 0 else Fraction(2**cfg.radius_exp),
        seg_len=Fraction(Decimal(cfg.seg_len)),
        prec=cfg.precision_bits,
        N=N,
        contour=contour,
        N_start=cfg.n_start,
        segments=cfg.segments,
        head_order=cfg.head_order,
        workers=cfg.workers,
        log=_say,
    )
    out = cfg.output or "certificate.json"
    write_certificate(cert, out)
    print(f"certificate written to {out}")
    print(f"q0 = {cert.q0}, N = {cert.bounds.N}")
    print(f"2/q0^N >= {float(cert.two_kappa_lower.lower()):.6e}")
    print(f"final constant >= {float(cert.final_constant.lower()):.12f}")
    return 0


def cmd_verify(cfg, args):
    doc = read_certificate_dict(args.certificate)
    checks = verify_certificate_dict(doc)
    width = max(len(c.name) for c in checks)
    ok = True
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        print(f"{c.name:<{width}}  {status}  {c.detail}")
        ok &= c.passed
    print("certificate:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_report(cfg, args):
    doc = read_certificate_dict(args.certificate)
    checks = verify_certificate_dict(doc)
    failed = [c for c in checks if not c.passed]
    if failed:
        for c in failed:
            print(f"FAILED CHECK: {c.name}  {c.detail}")
        return 1
    cert = certificate_from_dict(doc)
    b = cert.bounds
    z = cert.zero

    print("verified zero of the full sum:")
    print(f"  re in [{float(z.xi.re.lower()):.10f}, {float(z.xi.re.upper()):.10f}]")
    print(f"  im in [{float(z.xi.im.lower()):.10f}, {float(z.xi.im.upper()):.10f}]")
    print(f"  confirmed with M = {z.M}, circle radius {float(z.radius_used):.3e}, "
          f"winding {z.winding}")
    print(f"  min modulus on circle >= {float(z.min_on_circle.lower()):.6e}")
    print(f"  truncation tail on circle <= {float(z.tail_at_circle.upper()):.6e}")
    print()
    print(f"contour: [{float(b.x0):.10f}, {float(b.x1):.10f}] x "
          f"[{float(b.y0):.9f}, {float(b.y1):.9f}], N = {b.N}")
    rows = [
        ("alpha", f"{float(b.alpha.lower()):.8f}", REFERENCE_RUN["alpha"]),
        ("a", f"{float(b.a.upper()):.7f}", REFERENCE_RUN["a"]),
        ("a_w", f"{float(b.a_w.upper()):.7f}", REFERENCE_RUN["a_w"]),
        ("b", f"{float(b.b.upper()):.8f}", REFERENCE_RUN["b"]),
        ("b_w", f"{float(b.b_w.upper()):.9f}", REFERENCE_RUN["b_w"]),
        ("q0", str(cert.q0), REFERENCE_RUN["q0"]),
    ]
    print(f"{'constant':<10}{'this certificate':<22}{'reference run'}")
    for name, val, ref in rows:
        print(f"{name:<10}{val:<22}{ref}")
    print()
    if cert.legacy_q0 is not None:
        print(f"coarser criterion modulus: {cert.legacy_q0}")
    else:
        print(f"coarser criterion: infeasible ({cert.legacy_q0_note})")
    print()
    print(f"density lower bound: 2 kappa >= {float(cert.two_kappa_lower.lower()):.6e}"
          f"  (reference {REFERENCE_RUN['two_kappa']})")
    print(f"sign-change density: liminf V(T)/log T >= "
          f"{float(cert.final_constant.lower()):.12f}")
    print(f"  = gamma_1/pi + 2 kappa with gamma_1 = {float(cert.gamma1.mid):.10f}")
    return 0


def main(argv=None):
    # SUPPRESS keeps a subparser from clobbering a value parsed before the
    # subcommand when the same flag lives in both parsers
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--table", help="zero table path (overrides bundled)")
    common.add_argument("--precision", type=int, help="working precision in bits")
    common.add_argument("--workers", type=int, help="worker processes for contour pieces")
    common.add_argument("--output", "-o", help="output path")

    ap = argparse.ArgumentParser(
        prog="apzeros",
        parents=[common],
        description="certified zeros of the zeta-zero exponential sum and the "
        "sign-change density bound they imply",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_search = sub.add_parser("search", parents=[common], help="Newton scan for candidate zeros")
    p_search.add_argument("--tmin", type=float)
    p_search.add_argument("--tmax", type=float)
    p_search.add_argument("--step", type=float)
    p_search.add_argument("--order", type=int, help="scan truncation order")

    def add_candidate_flags(p):
        p.add_argument("--re", type=float, help="candidate real part")
        p.add_argument("--im", type=float, help="candidate imaginary part")
        p.add_argument("--candidates", help="candidates file from `search`")
        p.add_argument("--pick", type=int, default=0, help="row in the candidates file")

    p_prop = sub.add_parser("propose", parents=[common], help="contour proposal for a candidate")
    add_candidate_flags(p_prop)
    p_prop.add_argument("--order", type=int, help="fixed truncation order (else sweep)")

    p_cert = sub.add_parser("certify", parents=[common], help="run the rigorous pipeline")
    add_candidate_flags(p_cert)
    p_cert.add_argument("--order", type=int, help="contour truncation order")
    p_cert.add_argument("--x0", help="contour left edge (decimal, default re-0.05)")
    p_cert.add_argument("--x1", help="contour right edge (decimal, default re+0.05)")
    p_cert.add_argument("--y0", help="contour bottom edge (decimal)")
    p_cert.add_argument("--y1", help="contour top edge (decimal)")
    p_cert.add_argument("--m", type=int, help="confirmation truncation order")
    p_cert.add_argument("--seg-len", help="contour piece length (decimal)")
    p_cert.add_argument("--segments", type=int, help="starting circle subdivision")

    p_ver = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    p_ver.add_argument("certificate")

    p_rep = sub.add_parser("report", parents=[common], help="human-readable certificate summary")
    p_rep.add_argument("certificate")

    args = ap.parse_args(argv)

    def opt(name, default=None):
        return getattr(args, name, default)

    try:
        cfg = RunConfig.from_file(opt("config")) if opt("config") else RunConfig()
        if opt("table"):
            cfg.zero_table = opt("table")
        if opt("precision"):
            cfg.precision_bits = opt("precision")
        if opt("workers"):
            cfg.workers = opt("workers")
        if opt("output"):
            cfg.output = opt("output")
        if args.command == "search":
            if args.tmin is not None:
                cfg.t_min = args.tmin
            if args.tmax is not None:
                cfg.t_max = args.tmax
            if args.step is not None:
                cfg.step = args.step
            if args.order:
                cfg.n_search = args.order
        if args.command == "certify":
            if args.m:
                cfg.certify_m = args.m
            if args.seg_len:
                cfg.seg_len = args.seg_len
            if args.segments:
                cfg.segments = args.segments
    except (OSError, ValueError, InvalidOperation) as exc:
        _say(f"configuration error: {exc}")
        return EXIT_CONFIG

    try:
        if args.command == "search":
            return cmd_search(cfg, args)
        if args.command == "propose":
            return cmd_propose(cfg, args)
        if args.command == "certify":
            return cmd_certify(cfg, args)
        if args.command == "verify":
            return cmd_verify(cfg, args)
        if args.command == "report":
            return cmd_report(cfg, args)
    except (OSError, json.JSONDecodeError) as exc:
        _say(f"i/o error: {exc}")
        return EXIT_IO
    except (ZeroTableError, ValueError, InvalidOperation) as exc:
        _say(f"input error: {exc}")
        return EXIT_CONFIG
    except RefinementError as exc:
        _say(f"refinement failed: {exc}")
        return EXIT_REFINE
    except RoucheError as exc:
        _say(f"zero confirmation failed: {exc}")
        return EXIT_ROUCHE
    except (ContourError, InfeasibleContourError, SearchError) as exc:
        _say(f"contour stage failed: {exc}")
        return EXIT_CONTOUR
    except (PrecisionExhausted, InconclusiveEnclosure) as exc:
        _say(f"precision exhausted: {exc}")
        return EXIT_PRECISION
    except QSolveError as exc:
        _say(f"no admissible modulus: {exc}")
        return EXIT_Q0
    except RigorError as exc:
        _say(f"certification failed: {exc}")
        return EXIT_ROUCHE
    return 0


if __name__ == "__main__":
    sys.exit(main())
