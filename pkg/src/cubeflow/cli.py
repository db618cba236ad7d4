"""Command-line front end.

Exit status: 0 on success, 1 when two independent computations disagree, 2 on
bad input. Output is deterministic: dictionaries are sorted and nothing depends
on hashing or timing.
"""

from __future__ import annotations

import argparse
import json
import sys
from functools import lru_cache
from importlib import resources

import jsonschema

from . import lattice, pathalg, specseq
from .diagram import DiagramError, LinkDiagram, corpus_diagrams, load_corpus
from .khcube import build_complex, check_d_squared, homology
from .linkmat import to_json as linkmat_json
from .oracles import frobenius_kh_reduced, jones_at_minus_one, kauffman_jones, seifert_signature

MATCH, MISMATCH = 0, 1
BAD_INPUT = 2


class InputError(Exception):
    pass


@lru_cache(maxsize=None)
def schemas() -> dict:
    return json.loads(resources.files("cubeflow.data").joinpath("schemas.json").read_text())


def validate(kind: str, obj) -> None:
    jsonschema.validate(obj, schemas()[kind])


def emit(obj, kind: str) -> None:
    validate(kind, obj)
    print(json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False))


def read_pd(path: str) -> LinkDiagram:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")
    try:
        validate("pd", data)
    except jsonschema.ValidationError as exc:
        raise InputError(f"{path}: {exc.message}")
    return LinkDiagram.from_pd(data["pd"], data.get("name", ""))


def parse_lattice(text: str) -> lattice.ProductLattice:
    try:
        lengths = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"lattice must be comma-separated chain lengths, got {text!r}")
    return lattice.ProductLattice(lengths)


def euler(table: dict) -> dict[int, int]:
    out: dict[int, int] = {}
    for (t, q), r in table.items():
        out[q] = out.get(q, 0) + (-1) ** (t % 2) * r
    return {q: c for q, c in sorted(out.items()) if c}


def poincare_text(table: dict) -> str:
    return " + ".join(f"{r}·t^{t}q^{q}" if r > 1 else f"t^{t}q^{q}" for (t, q), r in sorted(table.items()))


def kh_table(d: LinkDiagram) -> dict:
    if d.n == 0:
        return {(0, 0): 1}
    return homology(build_complex(d))


# subcommands ----------------------------------------------------------------------

def cmd_kh(args) -> int:
    d = read_pd(args.pd)
    table = kh_table(d)
    if args.json:
        emit({
            "name": d.name, "crossings": d.n,
            "ranks": [{"t": t, "q": q, "rank": r} for (t, q), r in sorted(table.items())],
            "total_rank": sum(table.values()),
            "euler": {str(q): c for q, c in euler(table).items()},
            "poincare": poincare_text(table),
        }, "kh")
        return 0
    for (t, q), r in sorted(table.items()):
        print(f"t={t} q={q} delta={q / 2 - t:g} rank={r}")
    if args.polynomials:
        print(f"poincare: {poincare_text(table)}")
        print("euler: " + " ".join(f"{c:+d}q^{q}" for q, c in euler(table).items()))
    return 0


def cmd_sig(args) -> int:
    d = read_pd(args.pd)
    if d.n == 0:
        out = {"name": d.name, "sigma": 0, "det": 1, "nullity": 0, "istar": [], "A": []}
    else:
        out = linkmat_json(d)
        out["name"] = d.name
    status = 0
    if args.compare_oracle:
        ref = seifert_signature(d) if d.n else (0, 1, 0)
        match = tuple(ref) == (out["sigma"], out["det"], out["nullity"])
        out["oracle"] = {"sigma": ref[0], "det": ref[1], "nullity": ref[2], "match": match}
        status = MATCH if match else MISMATCH
    if args.json:
        emit(out, "sig")
        return status
    print(f"sigma={out['sigma']} det={out['det']} nullity={out['nullity']}")
    if args.compare_oracle:
        print("oracle: MATCH" if status == MATCH else
              f"oracle: MISMATCH (seifert sigma={ref[0]} det={ref[1]} nullity={ref[2]})")
    return status


def cmd_ss(args) -> int:
    if args.complex:
        try:
            with open(args.complex) as fh:
                data = json.load(fh)
            validate("complex", data)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.complex}: {exc}")
        except jsonschema.ValidationError as exc:
            raise InputError(f"{args.complex}: {exc.message}")
        c = specseq.FilteredComplex.from_json(data)
    else:
        c = specseq.from_pd(read_pd(args.from_pd))
    r_max = args.pages if args.pages is not None else specseq.converged_r(c)
    if r_max < 1:
        raise InputError("--pages must be at least 1")
    pgs = specseq.pages(c, r_max)
    top = specseq.pages(c, specseq.converged_r(c))[-1] if r_max < specseq.converged_r(c) else pgs[-1]
    brute = specseq.e_infinity_bruteforce(c)
    agrees = top.ranks == brute
    if args.json:
        emit({"pages": [p.to_json() for p in pgs], "converged": specseq.converged_r(c),
              "e_infinity_matches": agrees}, "ss")
        return MATCH if agrees else MISMATCH
    for p in pgs:
        print(f"E{p.r}: total {p.total()}")
        for row in p.to_json()["ranks"]:
            q = f" q={row['q']}" if "q" in row else ""
            print(f"  t={row['t']} delta={row['delta']}{q} rank={row['rank']}")
    print("E-infinity vs graded homology: " + ("MATCH" if agrees else "MISMATCH"))
    return MATCH if agrees else MISMATCH


def cmd_polytope(args) -> int:
    lat = parse_lattice(args.lattice)
    out: dict = {"lattice": list(lat.chain_lengths)}
    lines = []
    status = 0
    if args.fvector:
        poset = lattice.tubings(lattice.graph_of_lattice(lat))
        out["f_vector"] = poset.f_vector()
        lines.append("f-vector: " + " ".join(map(str, out["f_vector"])))
        try:
            rep = lattice.check_duality(lattice.catalog(lat))
        except lattice.LatticeError:
            rep = None
        if rep is not None:
            out["duality"] = {"ok": rep.ok}
            lines.append("duality: " + ("PASS" if rep.ok else "FAIL"))
            status |= 0 if rep.ok else MISMATCH
    if args.realize:
        r = lattice.integral(lattice.realize_lattice(lat))
        pts = r.points()
        extreme = r.valid() and all(lattice.is_extreme(pts, k) for k in range(len(pts)))
        out["realization"] = {"dimension": r.dimension, "vertices": [list(p) for p in pts],
                              "edges": r.edges(), "extreme": extreme}
        lines.append(f"realization: {len(pts)} vertices, {r.edges()} edges, dimension {r.dimension}")
        lines.extend("  " + " ".join(map(str, p)) for p in pts)
        lines.append("all vertices extreme: " + ("yes" if extreme else "NO"))
        status |= 0 if extreme else MISMATCH
    if args.cancellation:
        if set(lat.chain_lengths) != {1}:
            raise InputError("cube cancellation needs a hypercube lattice 1,1,...")
        rep = lattice.cube_cancellation(lat.l)
        out["cancellation"] = rep.to_json()
        lines.append(f"cubes: {rep.cubes}, survivors: {len(rep.survivors)}, cancelling: {rep.cancelling}")
        lines.append("cancellation: " + ("PASS" if rep.ok else "FAIL"))
        status |= 0 if rep.ok else MISMATCH
    if args.json:
        emit(out, "polytope")
    else:
        print("\n".join(lines))
    return status


_DUMP_NAMES = {(1,): ("point", "cube1"), (1, 1): ("cube2",), (1, 1, 1): ("cube3",), (2,): ("triad",)}


def cmd_pathalg(args) -> int:
    lat = parse_lattice(args.lattice)
    out: dict = {"lattice": list(lat.chain_lengths)}
    lines = []
    status = 0
    if args.verify:
        v = pathalg.verify_lattice(lat)
        out["verify"] = {"ok": v.ok, "intervals": len(v.reports),
                         "failures": [r.to_json(lat) for r in v.failures]}
        if v.ok:
            lines.append(f"identity: PASS (all {len(v.reports)} intervals)")
        else:
            lines.append(f"identity: FAIL ({len(v.failures)} of {len(v.reports)} intervals)")
            for r in v.failures:
                lines.append(f"  {pathalg.vertex_text(r.start, lat)} -> {pathalg.vertex_text(r.end, lat)}")
            status = MISMATCH
    if args.dump:
        names = _DUMP_NAMES.get(lat.chain_lengths)
        if names is None:
            raise InputError("printed blocks exist only for lattices 1, 1,1, 1,1,1 and 2")
        reports = [pathalg.dump_appendix(n) for n in names]
        out["dump"] = [r.to_json() for r in reports]
        for rep in reports:
            for b in rep.blocks:
                tag = "OK" if b.ok else "MISMATCH"
                note = f", {len(b.errata)} printed misprint(s) corrected" if b.errata else ""
                lines.append(f"{b.name}: {tag} ({len(b.generated)} words{note})")
                if args.words:
                    lines.extend("  " + w for w in b.generated)
                for w in b.missing:
                    lines.append(f"  missing {w}")
                for w in b.extra:
                    lines.append(f"  extra {w}")
            if not rep.ok:
                status = MISMATCH
    if args.json:
        emit(out, "pathalg")
    else:
        print("\n".join(lines))
    return status


def cmd_oracle(args) -> int:
    d = read_pd(args.pd)
    if args.which == "kh":
        mine = kh_table(d)
        ref = frobenius_kh_reduced(d)
        ok = mine == ref and (d.n == 0 or check_d_squared(build_complex(d)))
        print(f"reduced Kh ranks vs Frobenius model: {'MATCH' if ok else 'MISMATCH'}")
    elif args.which == "jones":
        chi = euler(kh_table(d))
        ref = kauffman_jones(d)
        # half-integral exponents (even component count) carry the sign of q^(1/2) -> -q^(1/2)
        ok = chi == {k: (-1) ** (k % 2) * c for k, c in ref.items()}
        print("jones: " + " ".join(f"{c:+d}q^{k / 2:g}" for k, c in ref.items()))
        print(f"|V(-1)| = {jones_at_minus_one(ref)}")
        print(f"graded Euler characteristic vs Kauffman bracket: {'MATCH' if ok else 'MISMATCH'}")
    else:
        mine = linkmat_json(d) if d.n else {"sigma": 0, "det": 1, "nullity": 0}
        ref = seifert_signature(d) if d.n else (0, 1, 0)
        ok = tuple(ref) == (mine["sigma"], mine["det"], mine["nullity"])
        print(f"arc-linking: sigma={mine['sigma']} det={mine['det']} nullity={mine['nullity']}")
        print(f"seifert:     sigma={ref[0]} det={ref[1]} nullity={ref[2]}")
        print(f"oracle: {'MATCH' if ok else 'MISMATCH'}")
    return MATCH if ok else MISMATCH


def corpus_checks(max_crossings: int = 9):
    """(label, ok) pairs for the corpus-wide knot checks."""
    reference = {k["name"]: k for k in load_corpus()}
    sig_ok = kh_ok = chi_ok = thin_ok = True
    for d in corpus_diagrams(max_crossings):
        ref = reference[d.name]
        lm = linkmat_json(d)
        s, det, nul = lm["sigma"], lm["det"], lm["nullity"]
        sig_ok &= (s, det, nul) == tuple(seifert_signature(d))
        sig_ok &= s == -ref["reference"]["signature"] and det == ref["reference"]["determinant"]
        table = homology(build_complex(d))
        kh_ok &= table == frobenius_kh_reduced(d)
        chi_ok &= abs(sum((-1) ** ((t + q // 2) % 2) * r for (t, q), r in table.items())) == det
        if ref["alternating"]:
            thin_ok &= {q / 2 - t for t, q in table} == {s / 2} and sum(table.values()) == det
    return [("signature formula vs Seifert form", sig_ok),
            ("exterior complex vs Frobenius model", kh_ok),
            ("graded Euler characteristic at q^(1/2)=i vs det", chi_ok),
            ("alternating knots thin on delta = sigma/2", thin_ok)]


def cmd_corpus(args) -> int:
    if not args.run_acceptance:
        for k in load_corpus():
            print(f"{k['name']:>6} {k['crossings']:>3}")
        return 0
    status = 0
    for label, ok in corpus_checks(args.max_crossings):
        print(f"{label}: {'PASS' if ok else 'FAIL'}")
        status |= 0 if ok else MISMATCH
    return status


# argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubeflow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    kh = sub.add_parser("kh", help="reduced Khovanov homology over F2")
    kh.add_argument("--pd", required=True)
    kh.add_argument("--json", action="store_true")
    kh.add_argument("--polynomials", action="store_true", help="also print Poincaré and Euler polynomials")
    kh.set_defaults(func=cmd_kh)

    sig = sub.add_parser("sig", help="signature, determinant and nullity from the arc-linking matrix")
    sig.add_argument("--pd", required=True)
    sig.add_argument("--compare-oracle", action="store_true")
    sig.add_argument("--json", action="store_true")
    sig.set_defaults(func=cmd_sig)

    ss = sub.add_parser("ss", help="spectral sequence pages of a filtered complex")
    src = ss.add_mutually_exclusive_group(required=True)
    src.add_argument("--complex")
    src.add_argument("--from-pd")
    ss.add_argument("--pages", type=int)
    ss.add_argument("--json", action="store_true")
    ss.set_defaults(func=cmd_ss)

    pt = sub.add_parser("polytope", help="tubings, realizations and cube cancellation")
    pt.add_argument("--lattice", required=True, help="chain lengths, e.g. 1,1,1 or 2,1")
    pt.add_argument("--fvector", action="store_true")
    pt.add_argument("--realize", action="store_true")
    pt.add_argument("--cancellation", action="store_true")
    pt.add_argument("--json", action="store_true")
    pt.set_defaults(func=cmd_polytope)

    pa = sub.add_parser("pathalg", help="formal path-algebra identity and printed word lists")
    pa.add_argument("--lattice", required=True)
    pa.add_argument("--verify", action="store_true")
    pa.add_argument("--dump", action="store_true")
    pa.add_argument("--words", action="store_true", help="list generated words under each block")
    pa.add_argument("--json", action="store_true")
    pa.set_defaults(func=cmd_pathalg)

    orc = sub.add_parser("oracle", help="compare against an independent computation")
    orc.add_argument("which", choices=("kh", "jones", "sig"))
    orc.add_argument("--pd", required=True)
    orc.set_defaults(func=cmd_oracle)

    cor = sub.add_parser("corpus", help="bundled knot table")
    cor.add_argument("--run-acceptance", action="store_true")
    cor.add_argument("--max-crossings", type=int, default=9)
    cor.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("polytope", "pathalg") and not (
            getattr(args, "fvector", False) or getattr(args, "realize", False)
            or getattr(args, "cancellation", False) or getattr(args, "verify", False)
            or getattr(args, "dump", False)):
        parser.error(f"{args.command}: choose at least one action flag")
    try:
        return args.func(args)
    except (InputError, DiagramError, lattice.LatticeError, pathalg.PathAlgebraError,
            specseq.FiltrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
