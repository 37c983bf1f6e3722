"""Command-line front end: ``monotri <command> [options]``.

Exit status is 0 on success, 1 when a verification fails, 2 for usage or
parse errors and 3 when a resource guard refuses the requested size.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from monotri import __version__
from monotri.core import (
    AsmMatrix,
    DomainError,
    InvalidASMError,
    InvalidEntryError,
    InvalidTriangleError,
    MonotoneTriangle,
    ResourceGuardError,
    asm_count,
    asm_to_mt,
    check_guard,
    enumerate_mt,
    inversion_number,
    mt_to_asm,
    mt_to_perm,
    perm_to_mt,
)

CACHE_ENV = "MONOTRI_CACHE_DIR"
CACHE_FORMAT = 1

# default size limits; --heavy raises each by one
GUARDS = {
    "enumerate": 7, "stats": 7, "hecke": 5, "el": 6, "shelling": 5,
    "morphism": 6, "conjecture": 4, "inv-vs-chains": 5, "symmetric-subsets": 6,
    "h-argmax": 7, "mobius": 5, "phi-sum": 6,
}

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# -------------------------------------------------------------- parsing

def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _int_token(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, found {tok!r}", line, col) from None


def parse_triangle(text: str, n: int | None = None, line: int = 1) -> MonotoneTriangle:
    """``"2;1 3"``: interior rows separated by ``;``, entries by spaces."""
    text = text.strip("\n")
    if not text.strip():
        if n in (None, 0, 1):
            return MonotoneTriangle.from_rows([], n=n if n is not None else 1)
        raise ParseError("empty triangle", line, 1)
    rows, offset = [], 0
    for chunk in text.split(";"):
        row = []
        for tok, col in _tokens(chunk):
            row.append((_int_token(tok, line, offset + col), offset + col))
        offset += len(chunk) + 1
        rows.append(row)
    size = len(rows) + 1 if n is None else n
    for m, row in enumerate(rows, start=1):
        if len(row) != m:
            col = row[0][1] if row else offset
            raise ParseError(f"row {m} must have {m} entries, found {len(row)}", line, col)
        for value, col in row:
            if not 1 <= value <= size:
                raise ParseError(f"entry {value} outside [1, {size}]", line, col)
        if any(a[0] >= b[0] for a, b in zip(row, row[1:])):
            raise ParseError(f"row {m} is not strictly increasing", line, row[0][1])
    return MonotoneTriangle.from_rows([[v for v, _ in r] for r in rows], n=size)


SIGNS = {"+": 1, "-": -1}


def parse_asm(text: str) -> AsmMatrix:
    """Rows on separate lines (or separated by ``/``), entries by spaces."""
    lines = [ln for ln in re.split(r"\n|/", text.strip("\n"))]
    rows = []
    for lineno, ln in enumerate(lines, start=1):
        toks = _tokens(ln)
        if not toks:
            continue
        row = []
        for tok, col in toks:
            v = SIGNS[tok] if tok in SIGNS else _int_token(tok, lineno, col)
            if v not in (-1, 0, 1):
                raise ParseError(f"entry {v} outside {{-1, 0, 1}}", lineno, col)
            row.append(v)
        rows.append((row, lineno))
    size = len(rows)
    for row, lineno in rows:
        if len(row) != size:
            raise ParseError(f"expected {size} entries, found {len(row)}", lineno, 1)
    return AsmMatrix.from_rows([r for r, _ in rows])


def parse_permutation(text: str) -> tuple[int, ...]:
    toks = _tokens(text.replace(",", " "))
    w = tuple(_int_token(t, 1, c) for t, c in toks)
    seen = set()
    for (t, c), x in zip(toks, w):
        if not 1 <= x <= len(w) or x in seen:
            raise ParseError(f"{x} breaks the permutation of 1..{len(w)}", 1, c)
        seen.add(x)
    return w


def parse_composition(text: str) -> tuple[str, tuple[int, ...]]:
    """``"L:1,2"`` or ``"M:3"``; the basis prefix defaults to L."""
    basis, _, body = text.rpartition(":")
    basis = basis or "L"
    if basis not in ("L", "M"):
        raise ParseError(f"unknown basis {basis!r}", 1, 1)
    parts = tuple(_int_token(t, 1, c) for t, c in _tokens(body.replace(",", " ")))
    return basis, parts


def format_triangle(t: MonotoneTriangle) -> str:
    return str(t)


def format_asm(a: AsmMatrix) -> list[list[int]]:
    return [list(r) for r in a.entries]


# ---------------------------------------------------------------- output

@dataclass
class Output:
    payload: Any
    headers: list[str] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)
    passed: bool = True

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, sort_keys=True) + "\n"
        cells = [[_cell(c) for c in r] for r in self.rows]
        if fmt == "tsv":
            lines = ["\t".join(self.headers)] if self.headers else []
            lines += ["\t".join(r) for r in cells]
            return "\n".join(lines) + "\n"
        table = ([self.headers] if self.headers else []) + cells
        widths = [max(len(r[i]) for r in table if i < len(r)) for i in range(max(map(len, table), default=0))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table]
        if self.headers:
            lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return " ".join(map(str, value))
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return "" if value is None else str(value)


def _guard(args, key: str, n: int) -> None:
    check_guard(n, GUARDS[key] + (1 if args.heavy else 0))


# ---------------------------------------------------------------- cache

def cache_dir(args) -> Path | None:
    raw = args.cache_dir or os.environ.get(CACHE_ENV)
    return Path(raw) if raw else None


def _cache_header(n: int) -> str:
    return f"# monotri-enumeration format={CACHE_FORMAT} n={n} count={asm_count(n)}"


def load_or_enumerate(n: int, directory: Path | None, max_n: int) -> list[MonotoneTriangle]:
    """MT_n in canonical order, read from the cache when a current file exists."""
    check_guard(n, max_n)
    path = directory / f"mt-{n}.txt" if directory else None
    if path and path.exists():
        with path.open() as fh:
            if fh.readline().rstrip("\n") == _cache_header(n):
                tris = [parse_triangle(ln, n=n, line=i) for i, ln in enumerate(fh, start=2)]
                if len(tris) == asm_count(n):
                    return tris
    tris = list(enumerate_mt(n, max_n))
    if path:
        directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mt-")
        with os.fdopen(fd, "w") as fh:
            fh.write(_cache_header(n) + "\n")
            fh.writelines(f"{t}\n" for t in tris)
        os.replace(tmp, path)
    return tris


# ------------------------------------------------------------- commands

def _read_input(args) -> str:
    if args.input is not None and args.input != "-":
        return args.input
    return sys.stdin.read()


def _describe(t: MonotoneTriangle) -> dict:
    w = mt_to_perm(t)
    return {"n": t.n, "triangle": format_triangle(t), "asm": format_asm(mt_to_asm(t)),
            "permutation": list(w) if w is not None else None}


def cmd_convert(args) -> Output:
    text = _read_input(args)
    if args.source == "asm":
        t = asm_to_mt(parse_asm(text))
    elif args.source == "triangle":
        t = parse_triangle(text.strip(), n=args.n)
    else:
        t = perm_to_mt(parse_permutation(text))
    info = _describe(t)
    if args.target != "all":
        info = {"n": info["n"], args.target: info[args.target]}
    rows = []
    if "triangle" in info:
        rows.append(["triangle", info["triangle"]])
    if "asm" in info:
        rows += [["asm" if i == 0 else "", r] for i, r in enumerate(info["asm"])]
    if "permutation" in info:
        rows.append(["permutation", info["permutation"] if info["permutation"] else "none"])
    return Output(info, ["form", "value"], rows)


def cmd_enumerate(args) -> Output:
    max_n = GUARDS["enumerate"] + args.heavy
    tris = load_or_enumerate(args.n, cache_dir(args), max_n)
    payload = {"n": args.n, "count": len(tris), "oracle": asm_count(args.n),
               "triangles": [str(t) for t in tris]}
    return Output(payload, ["index", "triangle"], [[i, str(t)] for i, t in enumerate(tris)])


def cmd_stats(args) -> Output:
    from monotri import stats

    _guard(args, "stats", args.n)
    n = args.n
    dist = stats.descent_distribution(n, max_n=n)
    h = dist.grouped()
    f = stats.f_vector(n)
    roots = stats.real_rootedness_check(h)
    flag = {",".join(map(str, j)) or "-": v for j, v in dist.polynomial_terms()}
    payload = {
        "n": n, "count": asm_count(n), "h_vector": h, "f_vector": f, "flag_h": flag,
        "maximal_elements": dist[range(1, n)],
        "log_concave": stats.log_concavity_check(h), "real_rooted": roots.real_rooted,
        "root_intervals": roots.to_dict()["intervals"],
    }
    rows = [["count", payload["count"]], ["h_vector", h], ["f_vector", f],
            ["maximal_elements", payload["maximal_elements"]],
            ["log_concave", payload["log_concave"]], ["real_rooted", roots.real_rooted]]
    rows += [[f"flag_h[{k}]", v] for k, v in flag.items()]
    return Output(payload, ["statistic", "value"], rows)


def _shelling_orders(args, n: int) -> list[tuple[str, list[MonotoneTriangle]]]:
    from monotri import hecke, phiposet

    if args.order_file:
        return [(f"file:{args.order_file}", _read_order_file(args.order_file, n))]
    dag = hecke.build_weak_dag(n, max_n=n)
    names = hecke.STRATEGIES + ("el-lex",) if args.strategy == "all" else (args.strategy,)
    out = []
    for name in names:
        if name == "el-lex":
            out.append((name, phiposet.el_lex_order(n, max_n=n)))
        else:
            order = hecke.linear_extension(dag, name, seed=args.seed)
            out.append((name, [dag.triangle(i) for i in order]))
    return out


def _read_order_file(path: str, n: int) -> list[MonotoneTriangle]:
    tris = []
    with open(path) as fh:
        for lineno, ln in enumerate(fh, start=1):
            if ln.strip() and not ln.lstrip().startswith("#"):
                tris.append(parse_triangle(ln.rstrip("\n"), n=n, line=lineno))
    return tris


def _suite(args, name: str, n: int) -> list[dict]:
    from monotri import hecke, phiposet, qsym, topology

    if name == "hecke":
        _guard(args, "hecke", n)
        return [{"suite": "hecke", **hecke.verify_relations(n, max_n=n).to_dict()}]
    if name == "el":
        _guard(args, "el", n)
        return [{"suite": "el", **phiposet.verify_el_labeling(n, max_n=n).to_dict()}]
    if name == "shelling":
        _guard(args, "shelling", n)
        dag = hecke.build_weak_dag(n, max_n=n)
        out = []
        for label, order in _shelling_orders(args, n):
            rep = phiposet.verify_shelling(order).to_dict()
            ids = [dag.index(t) for t in order]
            out.append({"suite": "shelling", "order": label, "n": n,
                        "linear_extension": hecke.is_linear_extension(dag, ids), **rep})
        return out
    if name == "morphism":
        if args.a is not None or args.b is not None:
            pairs = [(args.a or 0, args.b or 0)]
        else:
            pairs = [(a, n - a) for a in range(n + 1)]
        out = []
        for a, b in pairs:
            _guard(args, "morphism", a + b)
            rep = qsym.verify_morphism(a, b, max_total=a + b, jobs=args.jobs)
            out.append({"suite": "morphism", **rep.to_dict()})
        return out
    if name == "conjecture":
        _guard(args, "conjecture", n)
        rep = topology.verify_conjecture(n, max_n=n)
        return [{"suite": "conjecture", **rep.to_dict()}]
    raise DomainError(f"unknown suite {name!r}")


SUITES = ("hecke", "el", "shelling", "morphism", "conjecture")


def cmd_verify(args) -> Output:
    names = SUITES if args.suite == "all" else (args.suite,)
    n = args.n if args.n is not None else ((args.a or 0) + (args.b or 0))
    results = [r for name in names for r in _suite(args, name, n)]
    passed = all(r["passed"] for r in results)
    rows = []
    for r in results:
        detail = {k: v for k, v in r.items() if k not in ("suite", "passed", "n") and v not in (None, [], {})}
        rows.append([r["suite"], r.get("n", n), r["passed"], detail])
    return Output({"passed": passed, "results": results}, ["suite", "n", "passed", "detail"], rows, passed)


def cmd_explore(args) -> Output:
    from monotri import hecke, qsym, stats

    n = args.n
    if args.report == "inv-vs-chains":
        _guard(args, "inv-vs-chains", n)
        dag = hecke.build_weak_dag(n, max_n=n)
        ups = hecke.chain_distances(dag)
        rows = []
        for i, t in enumerate(dag.nodes):
            inv = inversion_number(mt_to_asm(t))
            if args.mismatch_only and inv == ups[i]:
                continue
            rows.append([str(t), inv, ups[i], t.is_permutation()])
        payload = {"n": n, "rows": [dict(zip(("triangle", "inv", "shortest_chain", "permutation"), r))
                                    for r in rows]}
        return Output(payload, ["triangle", "inv", "shortest_chain", "permutation"], rows)
    if args.report == "symmetric-subsets":
        _guard(args, "symmetric-subsets", n)
        preds = qsym.PREDICATES
        if args.predicate:
            if args.predicate not in preds:
                raise DomainError(f"unknown predicate {args.predicate!r}; choose from {sorted(preds)}")
            preds = {args.predicate: preds[args.predicate]}
        found = qsym.symmetric_subsets(n, preds)
        rows = [[r.predicate, r.size, r.symmetric, str(r.image)] for r in found]
        return Output({"n": n, "rows": [r.to_dict() for r in found]},
                      ["predicate", "size", "symmetric", "image_M"], rows)
    _guard(args, "h-argmax", n)
    rows = []
    for m in range(2, n + 1):
        h = stats.h_vector(m, max_n=m)
        k = stats.h_argmax(h)
        rows.append([m, h, k, m - 2, k == m - 2])
    keys = ("n", "h_vector", "argmax", "n_minus_2", "argmax_is_n_minus_2")
    return Output({"rows": [dict(zip(keys, r)) for r in rows]}, list(keys), rows)


def cmd_mobius(args) -> Output:
    from monotri import hecke, topology

    _guard(args, "mobius", args.n)
    dag = hecke.build_weak_dag(args.n, max_n=args.n)
    lo = parse_triangle(args.lower, n=args.n)
    hi = parse_triangle(args.upper, n=args.n)
    x, y = dag.index(lo), dag.index(hi)
    if not dag.leq(x, y):
        raise DomainError(f"{lo} is not below {hi} in weak order")
    mu = topology.mobius(dag, x, y)
    pred = topology.conjecture_prediction(dag, x, y)
    payload: dict[str, Any] = {"n": args.n, "lower": str(lo), "upper": str(hi), "mobius": mu,
                               "predicted": pred.value, "J": sorted(pred.J)}
    rows = [["mobius", mu], ["predicted", pred.value], ["J", sorted(pred.J) or "-"]]
    if x != y:
        try:
            cx = topology.IntervalComplex.build(dag, x, y)
        except ResourceGuardError as exc:
            payload["homology"] = f"skipped: {exc}"
        else:
            hom = topology.reduced_homology(cx)
            payload["homology"] = hom.to_dict()
            payload["euler_matches_mobius"] = hom.reduced_euler() == mu
            rows.append(["reduced_betti", [hom.betti[d] for d in sorted(hom.betti)]])
            rows.append(["euler_matches_mobius", payload["euler_matches_mobius"]])
        st = topology.structure_checks(dag, x, y)
        payload["structure"] = st.to_dict(dag)
        rows += [["is_lattice", st.is_lattice], ["is_ranked", st.is_ranked],
                 ["chain_lengths", st.chain_lengths]]
    return Output(payload, ["quantity", "value"], rows)


def cmd_qsym(args) -> Output:
    from monotri import qsym

    if args.action == "phi-sum":
        _guard(args, "phi-sum", args.n)
        pred = qsym.PREDICATES.get(args.predicate or "all")
        if pred is None:
            raise DomainError(f"unknown predicate {args.predicate!r}")
        chosen = [A for A in qsym._asms(args.n) if pred(A)]
        img = qsym.phi_sum(chosen, args.n)
        m = qsym.l_to_m(img)
        payload = {"n": args.n, "size": len(chosen), "L": img.to_dict(), "M": m.to_dict(),
                   "symmetric": qsym.is_symmetric(m)}
        rows = [["L", str(img)], ["M", str(m)], ["symmetric", payload["symmetric"]]]
        return Output(payload, ["basis", "expansion"], rows)
    if args.action == "product":
        lb, la = parse_composition(args.left)
        rb, ra = parse_composition(args.right)
        x = qsym.QSymElement.single(lb, la)
        y = qsym.QSymElement.single(rb, ra)
        m = qsym.m_product(qsym.to_basis(x, "M"), qsym.to_basis(y, "M"))
        check = qsym.m_product_quasi_shuffle(qsym.to_basis(x, "M"), qsym.to_basis(y, "M"))
        prod_l = qsym.m_to_l(m)
        payload = {"left": x.to_dict(), "right": y.to_dict(), "M": m.to_dict(), "L": prod_l.to_dict(),
                   "engines_agree": m == check}
        rows = [["M", str(m)], ["L", str(prod_l)], ["engines_agree", m == check]]
        return Output(payload, ["basis", "expansion"], rows)
    A, B = parse_asm(args.left), parse_asm(args.right)
    prod = qsym.asm_product(A, B)
    terms = [{"asm": format_asm(C), "triangle": str(asm_to_mt(C)), "coefficient": c}
             for C, c in prod.terms.items()]
    payload = {"n": prod.n, "terms": terms, "phi": qsym.phi_asm(prod).to_dict()}
    rows = [[t["triangle"], t["coefficient"], " / ".join(" ".join(map(str, r)) for r in t["asm"])]
            for t in terms]
    return Output(payload, ["triangle", "coefficient", "asm"], rows)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("pretty", "tsv", "json"), default="pretty")
    common.add_argument("--heavy", action="store_true", help="raise every size guard by one")
    common.add_argument("--cache-dir", default=None, help=f"enumeration cache (default ${CACHE_ENV})")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="monotri", description="Monotone triangles, ASMs and the 0-Hecke weak order.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", parents=[common], help="convert between ASM, triangle and permutation")
    p.add_argument("input", nargs="?", help="object text; read from stdin when omitted or '-'")
    p.add_argument("--from", dest="source", choices=("asm", "triangle", "perm"), required=True)
    p.add_argument("--to", dest="target", choices=("asm", "triangle", "permutation", "all"), default="all")
    p.add_argument("--n", type=int, default=None, help="size, needed only for n <= 1 triangles")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("enumerate", parents=[common], help="list MT_n in canonical order")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("stats", parents=[common], help="h-vector, flag h-vector and root diagnostics")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--strategy", default="all",
                   choices=("canonical-topological", "permutations-first", "seeded-random", "el-lex", "all"))
    p.add_argument("--order-file", default=None, help="facet order for the shelling suite, one triangle per line")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("explore", parents=[common], help="non-asserting data tables")
    p.add_argument("report", choices=("inv-vs-chains", "symmetric-subsets", "h-argmax"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--predicate", default=None)
    p.add_argument("--mismatch-only", action="store_true", help="inv-vs-chains: rows with inv != chain length")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("mobius", parents=[common], help="Moebius value and homology of a weak-order interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lower", required=True)
    p.add_argument("--upper", required=True)
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("qsym", parents=[common], help="quasisymmetric images and products")
    p.add_argument("action", choices=("phi-sum", "product", "asm-product"))
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--predicate", default=None)
    p.add_argument("--left", default=None)
    p.add_argument("--right", default=None)
    p.set_defaults(func=cmd_qsym)
    return parser


def _validate(args, parser: argparse.ArgumentParser) -> None:
    if getattr(args, "n", None) is not None and args.n < 0:
        parser.error("--n must be nonnegative")
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    if args.command == "verify" and args.n is None and args.suite != "morphism":
        parser.error("--n is required for this suite")
    if args.command == "verify" and args.suite == "morphism" and args.n is None and args.a is None and args.b is None:
        parser.error("verify morphism needs --n or --a/--b")
    if args.command == "qsym" and args.action != "phi-sum" and (args.left is None or args.right is None):
        parser.error(f"qsym {args.action} needs --left and --right")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    handler: Callable[[Any], Output] = args.func
    try:
        out = handler(args)
    except ResourceGuardError as exc:
        print(f"monotri: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ParseError, DomainError, InvalidASMError, InvalidEntryError,
            InvalidTriangleError, OSError) as exc:
        print(f"monotri: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out.render(args.format))
    return EXIT_OK if out.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
