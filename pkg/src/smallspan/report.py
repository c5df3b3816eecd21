"""Command line interface, the reference table of maximal counts, and the
scan for small-span polynomials that no Hermitian matrix realises."""
from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .charpoly import IntPoly, char_poly, fast_char_pairs, int_char_poly
from .equivalence import equivalence_witness
from .grow import SHIFTS, GrowConfig, Extender, LevelLists, grow_all, load_levels, level_dir, read_summary
from .matrix import HermitianGraph, MatrixFormatError, load
from .realroots import SpanClass, span_class, window_check
from .ring import TABLE_D, ring_make
from .templates import (
    FAMILIES,
    TemplateError,
    build_template,
    check_pq_determinant,
    check_span4_eigenvectors,
    default_weight,
    matrix_cyclotomic,
    matrix_span,
    matrix_window,
    parse_family_params,
    parse_weight,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

TABLE_ROWS = tuple(range(2, 9))
# maximal small-span matrices not equivalent to an integer matrix, by ring and size
TABLE1: dict[int, tuple[int, ...]] = {
    -11: (2, 0, 0, 0, 0, 0, 0),
    -7: (2, 6, 7, 8, 4, 2, 2),
    -3: (2, 3, 10, 9, 14, 2, 3),
    -2: (4, 5, 7, 8, 4, 2, 2),
    -1: (2, 8, 16, 10, 6, 3, 3),
    2: (3, 5, 7, 8, 4, 2, 2),
    3: (2, 0, 0, 0, 0, 0, 0),
    5: (2, 4, 10, 1, 0, 0, 0),
}


class DataError(Exception):
    """Missing or malformed enumeration data."""


# -- the reference table ----------------------------------------------------------------------
def observed_table(in_dir: Path, rings: Sequence[int] = TABLE_D) -> dict[int, tuple]:
    out = {}
    for d in rings:
        try:
            rows = read_summary(in_dir, d)
        except FileNotFoundError as exc:
            raise DataError(f"d={d}: no summary.csv under {in_dir} (run enumerate first)") from exc
        vals = []
        for n in TABLE_ROWS:
            if n not in rows or rows[n]["maximal_nonrational"] in ("", None):
                raise DataError(f"d={d}: level {n + 1} missing, maximality at n={n} is not certified")
            vals.append(int(rows[n]["maximal_nonrational"]))
        out[d] = tuple(vals)
    return out


def table_markdown(observed: dict[int, tuple], expected: dict[int, tuple] = TABLE1) -> str:
    rings = sorted(expected)
    lines = ["| n | " + " | ".join(f"d={d}" for d in rings) + " |", "|---" * (len(rings) + 1) + "|"]
    for i, n in enumerate(TABLE_ROWS):
        cells = []
        for d in rings:
            e = expected[d][i]
            o = observed.get(d, (None,) * len(TABLE_ROWS))[i]
            cells.append(str(e) if o == e else f"**{o}** (expected {e})")
        lines.append(f"| {n} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def verify_table1(in_dir: Path) -> tuple[bool, str]:
    observed = observed_table(in_dir)
    return observed == TABLE1, table_markdown(observed)


# -- missing polynomials ------------------------------------------------------------------------
def _ip(*high: int) -> IntPoly:
    return IntPoly.from_high(high)


P_ELUSIVE = _ip(1, -1, -6, 6, 8, -8, 1)


@dataclass(frozen=True)
class MissingPolySet:
    cosine: tuple[IntPoly, ...] = (P_ELUSIVE, _ip(1, 0, -7, 0, 14, 0, -7), _ip(1, 0, -6, 0, 9, 0, -3))
    noncosine: tuple[IntPoly, ...] = (
        _ip(1, -1, -7, 5, 15, -5, -10, -1),
        _ip(1, 0, -8, 0, 19, 0, -12, -1),
        _ip(1, -2, -6, 11, 11, -17, -6, 7),
    )

    @property
    def all(self) -> tuple[IntPoly, ...]:
        return self.cosine + self.noncosine


MISSING = MissingPolySet()


def best_translate(p: IntPoly) -> IntPoly:
    """p(x - c) for the integer c that puts the roots furthest inside [-2, 5/2)."""
    for c in sorted(SHIFTS, key=abs):
        q = p.translate(-c)
        if window_check(q):
            return q
    return p


def self_check() -> None:
    """Every listed polynomial must be small-span after translation."""
    for p in MISSING.all:
        q = best_translate(p)
        if not (window_check(q) and span_class(q) is SpanClass.LESS):
            raise AssertionError(f"{p} is not small-span")


def realises(g: HermitianGraph, target: IntPoly) -> bool:
    """Whether some matrix equivalent to g has char poly ``target``."""
    q = int_char_poly(g)
    if q is None or q.degree != target.degree:
        return False
    n = q.degree
    tr_t = -target.coeffs[n - 1]
    tr_q = -q.coeffs[n - 1]
    for eps in (1, -1):
        diff = tr_t - eps * tr_q
        if diff % n:
            continue
        c = diff // n
        # char poly of eps*A + cI
        r = q.reflect() if eps == -1 else q
        if r.translate(-c) == target:
            return True
    return False


def scan_level(lists: LevelLists, n: int, target: IntPoly) -> list[HermitianGraph]:
    level = lists[n]
    return [g for g in level.reps if realises(g, target)]


def missing_poly_scan(in_dir: Path, r: int, rings: Sequence[int] = TABLE_D) -> tuple[bool, list[str]]:
    """Report lines and whether p(x)^(r/6) is unrealised at size r."""
    if r % 6:
        raise ValueError("r must be a multiple of 6")
    self_check()
    lines: list[str] = []
    if r == 12:
        return constrained_scan_12(in_dir, rings)
    clean = True
    for d in rings:
        cfg = GrowConfig(d=d, max_n=9)
        lists = load_levels(in_dir, cfg)
        if 6 not in lists.levels:
            raise DataError(f"d={d}: level 6 missing under {in_dir}")
        hits = scan_level(lists, 6, P_ELUSIVE)
        clean &= not hits
        found = [str(p) for p in MISSING.cosine if scan_level(lists, 6, p)]
        lines.append(f"d={d}: p(x) {'REALISED' if hits else 'absent'} at r=6; degree-6 realised: {found or 'none'}")
        if 7 in lists.levels:
            q = P_ELUSIVE * _ip(1, 1)
            near = len(scan_level(lists, 7, q))
            nc = [str(p) for p in MISSING.noncosine if scan_level(lists, 7, p)]
            lines.append(f"d={d}: (x+1)p(x) realised by {near} class(es) at n=7; degree-7 non-cosine realised: {nc or 'none'}")
    lines.append(f"p(x) = {P_ELUSIVE}: {'not realised' if clean else 'REALISED'} by any 6x6 class")
    return clean, lines


def _fits(g: HermitianGraph, lo: float, hi: float, tol: float = 1e-7) -> bool:
    """Whether some eps*A + cI has every embedded spectrum inside [lo, hi]."""
    signs = (1,) if g.ring.d < 0 else (1, -1)
    specs = [np.linalg.eigvalsh(g.numeric(s)) for s in signs]
    for eps in (1, -1):
        for c in SHIFTS:
            if all(min(eps * e.min(), eps * e.max()) + c >= lo - tol and max(eps * e.min(), eps * e.max()) + c <= hi + tol for e in specs):
                return True
    return False


def constrained_scan_12(in_dir: Path, rings: Sequence[int] = TABLE_D) -> tuple[bool, list[str]]:
    """Search for 12x12 matrices with char poly p(x)^2.

    Such a matrix has all eigenvalues in [m, M], the extreme roots of p, and
    so do all of its principal submatrices (interlacing).  Starting from the
    stored level-9 classes that fit, classes are grown one vertex at a time
    keeping only those that still fit.  A disconnected solution would split
    into two 6x6 blocks with char poly p, which the r=6 scan excludes.
    """
    roots = np.roots(P_ELUSIVE.high()).real
    lo, hi = float(roots.min()), float(roots.max())
    target = P_ELUSIVE * P_ELUSIVE
    lines = [f"r=12 constrained search (independent reconstruction), window [{lo:.6f}, {hi:.6f}]"]
    clean = True
    for d in rings:
        cfg = GrowConfig(d=d, max_n=9)
        lists = load_levels(in_dir, cfg)
        if 9 not in lists.levels:
            raise DataError(f"d={d}: level 9 missing under {in_dir}; r=12 not certified")
        frontier = [g for g in lists[9].reps if _fits(g, lo, hi)]
        sizes = [len(frontier)]
        ext = Extender(GrowConfig(d=d, max_n=12))
        for n in (10, 11, 12):
            seen: dict[tuple, list[HermitianGraph]] = {}
            nxt = []
            for g in frontier:
                for x in ext.extensions(g):
                    h = x.graph
                    if not _fits(h, lo, hi):
                        continue
                    key = fast_char_pairs(h)
                    bucket = seen.setdefault(key, [])
                    if any(equivalence_witness(h, k) is not None for k in bucket):
                        continue
                    bucket.append(h)
                    nxt.append(h)
            frontier = nxt
            sizes.append(len(frontier))
        hits = [g for g in frontier if realises(g, target)]
        clean &= not hits
        lines.append(f"d={d}: fitting classes at n=9..12: {sizes}; p(x)^2 {'REALISED' if hits else 'absent'}")
    lines.append(f"p(x)^2: {'not realised' if clean else 'REALISED'} by any 12x12 class")
    return clean, lines


# -- command line ---------------------------------------------------------------------------------
def _load(path: str) -> HermitianGraph:
    try:
        return load(path)
    except FileNotFoundError as exc:
        raise DataError(f"{path}: no such file") from exc
    except (MatrixFormatError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(str(exc)) from exc


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def cmd_enumerate(a) -> int:
    cfg = GrowConfig(d=a.d, max_n=a.max_n, embedding_check=a.embedding_check, workers=a.jobs)
    out = Path(a.out)
    resume = a.resume is not None
    if resume and Path(a.resume).resolve() != out.resolve():
        src = Path(a.resume) / f"d{a.d}"
        if not src.exists():
            raise DataError(f"{src}: nothing to resume from")
        shutil.copytree(src, out / f"d{a.d}", dirs_exist_ok=True)
    lists = grow_all(cfg, out, resume=resume)
    for n in sorted(lists.levels):
        print(f"d={a.d} n={n} classes={len(lists[n])}")
    return EXIT_OK


def cmd_verify(a) -> int:
    ok, md = verify_table1(Path(a.in_dir))
    print(md)
    print("table matches" if ok else "table MISMATCH")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_span(a) -> int:
    g = _load(a.file)
    print(f"window: {_yn(matrix_window(g))}, span: {matrix_span(g)}, cyclotomic: {_yn(matrix_cyclotomic(g))}")
    return EXIT_OK


def cmd_charpoly(a) -> int:
    print(char_poly(_load(a.file)))
    return EXIT_OK


def cmd_equiv(a) -> int:
    g, h = _load(a.file1), _load(a.file2)
    w = equivalence_witness(g, h)
    if w is None:
        print("not equivalent")
        return EXIT_MISMATCH
    sigma, eps, c = w
    strong = eps == 1 and c == 0
    print(f"equivalent: sigma={'conj' if sigma else 'id'}, eps={eps:+d}, c={c}" + (" (strongly)" if strong else ""))
    return EXIT_OK


def _template_check(family: str, params: list[tuple], d: int | None, weight_text: str | None) -> tuple[bool, list[str]]:
    fam = FAMILIES.get(family)
    if fam is None:
        raise TemplateError(f"unknown family {family!r}")
    if d is None:
        g0 = build_template(family, params[0], None, None)
        d = g0.ring.d
    weight = parse_weight(d, weight_text) if weight_text else None
    lines: list[str] = []
    ok = True
    for p in params:
        label = f"{family}{p if p else ''}".replace(",)", ")")
        if family in ("P", "Q"):
            value, expected = check_pq_determinant(family, p[0], d, weight)
            g = build_template(family, p, d, weight)
            good = value == expected and matrix_cyclotomic(g) and matrix_span(g) is SpanClass.LESS
            lines.append(f"{label}: det(A+2I)={value} expected {expected}, cyclotomic={_yn(matrix_cyclotomic(g))}, span {matrix_span(g)}")
        elif family in ("X1", "X2", "X3", "X4"):
            g = build_template(family, p, d, weight)
            good = check_span4_eigenvectors(family, p, d, weight) and matrix_span(g) is SpanClass.EXACT
            lines.append(f"{label}: eigenvectors at +-2 {'verified' if good else 'FAILED'}, span {matrix_span(g)}")
        elif family in ("C_even", "C_odd", "T"):
            g = build_template(family, p, d, weight)
            sq = [[sum((g.w[i][k] * g.w[k][j] for k in range(g.n)), g.ring.zero) for j in range(g.n)] for i in range(g.n)]
            good = all(sq[i][j] == (4 if i == j else 0) for i in range(g.n) for j in range(g.n))
            lines.append(f"{label}: A^2 = 4I {'holds' if good else 'FAILS'}, span {matrix_span(g)}")
        elif family == "frakC8":
            g = build_template(family, p, d, weight)
            good = matrix_window(g) and matrix_span(g) is SpanClass.LESS
            lines.append(f"{label}: window {_yn(matrix_window(g))}, span {matrix_span(g)}, char poly {char_poly(g)}")
        elif family.startswith("Sec4"):
            g = build_template(family, p, d, weight)
            good = True
            lines.append(f"{label}: char poly {char_poly(g)}")
        else:
            g = build_template(family, p, d, weight)
            good = matrix_span(g) is not SpanClass.LESS
            lines.append(f"{label}: span {matrix_span(g)}")
        ok &= good
    if family == "P" and ok:
        lines.append("det(A+2I)=4 for all n")
    return ok, lines


def cmd_template(a) -> int:
    fam_prefix, params = parse_family_params(a.params)
    family = a.family or fam_prefix
    if family is None:
        raise TemplateError("--family is required")
    ok, lines = _template_check(family, params, a.ring, a.weight)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_missing(a) -> int:
    ok, lines = missing_poly_scan(Path(a.in_dir), a.r)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smallspan", description="Small-span Hermitian matrices over quadratic integer rings.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    e = sub.add_parser("enumerate", help="grow all classes up to a size")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--max-n", type=int, default=9)
    e.add_argument("--embedding-check", choices=("single", "both"), default="both")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--resume", metavar="DIR")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("verify", help="compare enumeration output with the reference table")
    v.add_argument("what", choices=("table1",))
    v.add_argument("--in", dest="in_dir", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("span", help="window, span and cyclotomic verdicts for a matrix file")
    s.add_argument("file")
    s.set_defaults(func=cmd_span)

    c = sub.add_parser("charpoly", help="print the characteristic polynomial")
    c.add_argument("file")
    c.set_defaults(func=cmd_charpoly)

    q = sub.add_parser("equiv", help="decide equivalence of two matrices")
    q.add_argument("file1")
    q.add_argument("file2")
    q.set_defaults(func=cmd_equiv)

    t = sub.add_parser("template", help="check a parametric family")
    t.add_argument("action", choices=("check",))
    t.add_argument("--family")
    t.add_argument("--params", default="")
    t.add_argument("--ring", type=int)
    t.add_argument("--weight")
    t.set_defaults(func=cmd_template)

    m = sub.add_parser("missing-polys", help="search for matrices with the elusive char poly")
    m.add_argument("--r", type=int, choices=(6, 12), required=True)
    m.add_argument("--in", dest="in_dir", required=True)
    m.set_defaults(func=cmd_missing)
    return ap


def cli_main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(message)s")
    try:
        return a.func(a)
    except (TemplateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, KeyError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main())
