"""Command-line front end: deterministic text/JSON/CSV emitters and a
content-addressed on-disk cache for the expensive verification runs."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__
from .exactalg import PolyRing
from .groupdata import (
    GroupSpec,
    flag_poincare,
    fundamental_degrees,
    good_primes_excluded,
    isotropic_grassmannian_poincare,
    torsion_primes,
    weyl_elements,
    weyl_length_series,
)
from . import charclass, invariants, quillen

SCHEMA = "modp/1"


# -- cache -------------------------------------------------------------

def default_cache_dir() -> Path:
    env = os.environ.get("MODP_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "modp-invariants"


class ResultCache:
    """Content-addressed JSON store keyed on (operation, parameters,
    library version); a hit is served only on an exact version match."""

    def __init__(self, directory: Path, policy: str = "use"):
        self.directory = directory
        self.policy = policy
        self._warned = False

    def _key(self, op: str, params: dict) -> str:
        blob = json.dumps([op, params, __version__], sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def roundtrip(self, op: str, params: dict, compute):
        if self.policy == "off":
            return compute()
        key = self._key(op, params)
        path = self.directory / f"{key}.json"
        if self.policy == "use" and path.exists():
            try:
                entry = json.loads(path.read_text())
                if entry.get("version") == __version__:
                    return entry["payload"]
            except (ValueError, KeyError):
                pass  # corrupted entry: recompute and overwrite
        payload = compute()
        entry = {"schema": SCHEMA, "key": key, "version": __version__,
                 "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                 "payload": payload}
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w") as handle:
                json.dump(entry, handle, sort_keys=True)
            os.replace(tmp, path)
        except OSError:
            if not self._warned:
                print(f"modp: cache directory {self.directory} is not writable; "
                      "continuing without cache", file=sys.stderr)
                self._warned = True
        return payload


# -- emitters ----------------------------------------------------------

def emit(args, command: str, params: dict, result: dict,
         text_lines: list[str], csv_rows: list[list] | None = None) -> None:
    if getattr(args, "json", False):
        doc = {"schema": SCHEMA, "command": command, "params": params,
               "result": result}
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    elif getattr(args, "csv", False) and csv_rows is not None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        for row in csv_rows:
            writer.writerow(row)
    else:
        for line in text_lines:
            print(line)


def group_payload(g: GroupSpec) -> dict:
    return {"family": g.family, "rank": g.rank,
            "degrees": fundamental_degrees(g),
            "bad_primes": sorted(good_primes_excluded(g)),
            "torsion_primes": sorted(torsion_primes(g))}


def _group_from_args(args) -> GroupSpec:
    rank = args.rank
    if rank is None:
        implied = {"G2": 2, "F4": 4, "E6": 6, "E7": 7, "E8": 8}
        if args.family not in implied:
            raise SystemExit2(f"--rank is required for family {args.family}")
        rank = implied[args.family]
    return GroupSpec(args.family, rank)


class SystemExit2(SystemExit):
    def __init__(self, message: str):
        print(f"modp: error: {message}", file=sys.stderr)
        super().__init__(2)


# -- subcommands -------------------------------------------------------

def cmd_degrees(args) -> int:
    g = _group_from_args(args)
    payload = group_payload(g)
    emit(args, "degrees", {"family": g.family, "rank": g.rank}, payload,
         [" ".join(str(d) for d in payload["degrees"])])
    return 0


def cmd_primes(args) -> int:
    g = _group_from_args(args)
    payload = group_payload(g)
    emit(args, "primes", {"family": g.family, "rank": g.rank}, payload,
         [f"bad: {' '.join(map(str, payload['bad_primes'])) or '-'}",
          f"torsion: {' '.join(map(str, payload['torsion_primes'])) or '-'}"])
    return 0


def cmd_weyl(args) -> int:
    g = _group_from_args(args)
    lengths = weyl_length_series(g)
    payload = {"family": g.family, "rank": g.rank,
               "order": sum(lengths), "length_series": lengths}
    try:
        payload["elements"] = len(weyl_elements(g))
    except ValueError:
        pass
    emit(args, "weyl", {"family": g.family, "rank": g.rank}, payload,
         [f"order {payload['order']}",
          "length series " + " ".join(map(str, lengths))])
    return 0


def cmd_flag_poincare(args) -> int:
    g = _group_from_args(args)
    coeffs = flag_poincare(g).as_polynomial()
    payload = {"family": g.family, "rank": g.rank, "coefficients": coeffs,
               "value_at_one": sum(coeffs)}
    emit(args, "flag-poincare", {"family": g.family, "rank": g.rank}, payload,
         [" ".join(map(str, coeffs)), f"value at q=1: {sum(coeffs)}"],
         csv_rows=[["degree", "coefficient"]] + [[i, c] for i, c in enumerate(coeffs)])
    return 0


def _report_payload(report) -> dict:
    return {"label": report.label, "claimed": report.claimed,
            "failure": report.failure, "passed": report.passed,
            "rows": [{"degree": r.degree, "invariant_dim": r.invariant_dim,
                      "span_rank": r.span_rank, "series_coeff": r.series_coeff,
                      "ok": r.ok} for r in report.rows]}


def _report_lines(payload: dict) -> list[str]:
    lines = [f"{payload['label']}  claimed k[{', '.join(payload['claimed'])}]"]
    if payload["failure"]:
        lines.append(f"FAIL: {payload['failure']}")
        return lines
    lines.append("degree  invariants  span  series  ok")
    for row in payload["rows"]:
        lines.append(f"{row['degree']:>6}  {row['invariant_dim']:>10}  "
                     f"{row['span_rank']:>4}  {row['series_coeff']:>6}  "
                     f"{'yes' if row['ok'] else 'NO'}")
    lines.append("PASS" if payload["passed"] else "FAIL")
    return lines


def _report_csv(payload: dict) -> list[list]:
    rows = [["degree", "invariant_dim", "span_rank", "series_coeff", "ok"]]
    for r in payload["rows"]:
        rows.append([r["degree"], r["invariant_dim"], r["span_rank"],
                     r["series_coeff"], int(r["ok"])])
    return rows


def cmd_invariants(args) -> int:
    dmax = args.max_degree
    params = {"group": args.group, "n": args.n, "r": args.r,
              "family": args.family, "rank": args.rank, "p": args.p,
              "max_degree": dmax}

    def compute() -> dict:
        if args.group == "spin":
            if args.n is None:
                raise SystemExit2("--group spin needs --n")
            action = invariants.spin_action(args.n, args.p)
            cp = invariants.spin_claimed(action, args.n)
        elif args.group == "nakajima":
            if args.r is None:
                raise SystemExit2("--group nakajima needs --r")
            action = invariants.symmetric_quotient_action(args.r, args.p)
            cp = invariants.nakajima_claimed(action)
        elif args.group == "classical":
            if args.family is None or args.rank is None:
                raise SystemExit2("--group classical needs --family and --rank")
            action = invariants.classical_action(args.family, args.rank, args.p)
            cp = invariants.classical_claimed(action, args.family, args.rank, args.p)
        else:
            raise SystemExit2(f"unknown group kind {args.group}")
        return _report_payload(invariants.verify_presentation(action, cp, dmax))

    payload = _cache(args).roundtrip("invariants", params, compute)
    emit(args, "invariants", params, payload, _report_lines(payload),
         csv_rows=_report_csv(payload))
    return 0 if payload["passed"] else 1


def cmd_inv2_check(args) -> int:
    ring = PolyRing(["y", "x"])
    report = invariants.lemma_inv2_check(ring, ring.var("y"), "x", args.max_degree)
    payload = _report_payload(report)
    emit(args, "inv2-check", {"max_degree": args.max_degree}, payload,
         _report_lines(payload), csv_rows=_report_csv(payload))
    return 0 if payload["passed"] else 1


_RING_BUILDERS = {
    "bso": lambda args: charclass.bso_presentation(args.n),
    "bo": lambda args: charclass.bo_presentation(args.n),
    "bmu": lambda args: charclass.bmu_p_presentation(),
    "bz2": lambda args: charclass.bz2_presentation(),
}


def cmd_ring(args) -> int:
    if args.name in ("bso", "bo") and args.n is None:
        raise SystemExit2(f"--name {args.name} needs --n")
    pres = _RING_BUILDERS[args.name](args)
    series = pres.series().coefficients(args.series_to)
    payload = dict(pres.to_json(), series=series)
    gens = ", ".join(f"{g.name}({g.degree})" for g in pres.generators)
    emit(args, "ring", {"name": args.name, "n": args.n,
                        "series_to": args.series_to}, payload,
         [f"generators: {gens}",
          "relations: " + ("; ".join(payload["relations"]) or "none"),
          "series: " + " ".join(map(str, series))])
    return 0


def _uclass_from_json(doc: dict) -> charclass.UClass:
    ring_doc = doc["ring"]
    pres = charclass.GradedPresentation(
        [charclass.Generator(n, w) for n, w in
         zip(ring_doc["vars"], ring_doc["weights"])])
    comps = [pres.ring.poly(text) for text in doc["components"]]
    return charclass.UClass(pres, comps)


def cmd_whitney(args) -> int:
    try:
        e = _uclass_from_json(json.loads(args.e))
        f_doc = json.loads(args.f)
        f = charclass.UClass(e.presentation,
                             [e.presentation.ring.poly(t) for t in f_doc["components"]]) \
            if "ring" not in f_doc else _uclass_from_json(f_doc)
        total = charclass.whitney_sum(e, f)
    except (ValueError, KeyError) as err:
        raise SystemExit2(f"bad u-class input: {err}")
    payload = {"ring": {"vars": list(total.presentation.ring.names),
                        "weights": list(total.presentation.ring.weights)},
               "components": [str(c) for c in total.components]}
    emit(args, "whitney", {}, payload,
         [f"u_{m} = {c}" for m, c in enumerate(payload["components"])])
    return 0


def cmd_restrict(args) -> int:
    if args.target == "K":
        rest = charclass.restriction_to_K(args.n)
    else:
        rest = charclass.restriction_bso_to_bo2r(args.n)
    images = {name: str(rest.image_of(name)) for name in rest.source.ring.names}
    payload = {"n": args.n, "target": args.target, "images": images}
    emit(args, "restrict", {"n": args.n, "target": args.target}, payload,
         [f"{name} -> {img}" for name, img in sorted(
             images.items(), key=lambda kv: rest.source.generator(kv[0]).degree)])
    return 0


def cmd_jacobian(args) -> int:
    report = charclass.jacobian_certificate(args.r, args.variant)
    payload = {"variant": report.variant, "r": report.r, "ok": report.ok,
               "determinant": str(report.determinant),
               "expected": str(report.expected),
               "difference": str(report.difference),
               "row_factors": [str(f) for f in report.row_factors]}
    emit(args, "jacobian", {"r": args.r, "variant": args.variant}, payload,
         [f"{report.variant} variant, r={report.r}: {'PASS' if report.ok else 'FAIL'}",
          f"determinant = {report.determinant}",
          f"expected    = {report.expected}"])
    return 0 if report.ok else 1


def _parse_dims(spec: str) -> list[int]:
    if ".." in spec:
        lo, _, hi = spec.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def cmd_quillen(args) -> int:
    dims = _parse_dims(args.dims)
    params = {"n": args.n, "dims": dims}

    def compute() -> dict:
        qp = quillen.quillen_presentation(args.n)
        return {"n": args.n, "h": qp.h,
                "theta_degrees": [t.degree() for t in qp.thetas],
                "extra_degree": qp.extra_degree,
                "dims": [{"degree": d, "dim": quillen.quillen_dim(args.n, d)}
                         for d in dims]}

    payload = _cache(args).roundtrip("quillen", params, compute)
    lines = [f"h = {payload['h']}, ideal degrees {payload['theta_degrees']}, "
             f"extra generator degree {payload['extra_degree']}"]
    lines += [f"dim H^{row['degree']} = {row['dim']}" for row in payload["dims"]]
    emit(args, "quillen", params, payload, lines,
         csv_rows=[["degree", "dim"]] + [[r["degree"], r["dim"]]
                                         for r in payload["dims"]])
    return 0


def cmd_spin_compare(args) -> int:
    def compute() -> dict:
        return quillen.spin11_compare().to_dict()

    try:
        payload = _cache(args).roundtrip("spin-compare", {}, compute)
    except RuntimeError as err:
        print(f"modp: spin-compare failed: {err}", file=sys.stderr)
        return 1
    emit(args, "spin-compare", {}, payload,
         [f"D_top       = {payload['D_top']}",
          f"D_low       = {payload['D_low']}",
          f"D_dR_lower  = {payload['D_dR_lower']}",
          f"verdict: {payload['verdict']}"])
    return 0


def cmd_selftest(args) -> int:
    checks: list[tuple[str, bool]] = []

    def check(name, fn):
        t0 = time.time()
        try:
            ok = bool(fn())
        except Exception as err:  # a selftest must not crash the runner
            print(f"FAIL {name}: {err}")
            checks.append((name, False))
            return
        checks.append((name, ok))
        print(f"{'PASS' if ok else 'FAIL'} {name} ({time.time() - t0:.1f}s)")

    ring = PolyRing(["t1", "t2", "t3"])
    check("poly text roundtrip",
          lambda: ring.poly("t1*t2 + t1*t3 + t2*t3") ==
          ring.poly(str(ring.poly("t1*t2 + t1*t3 + t2*t3"))))
    check("flag poincare vs BFS",
          lambda: weyl_length_series(GroupSpec("B", 3)) ==
          flag_poincare(GroupSpec("B", 3)).as_polynomial())
    check("isotropic grassmannian n=11 total",
          lambda: isotropic_grassmannian_poincare(11).value_at_one() == 32)
    check("spin(7) invariants to degree 8", lambda: invariants.verify_presentation(
        invariants.spin_action(7), invariants.spin_claimed(invariants.spin_action(7), 7),
        8).passed)
    check("lemma inv2 to degree 6", lambda: invariants.lemma_inv2_check(
        PolyRing(["y", "x"]), PolyRing(["y", "x"]).var("y"), "x", 6).passed)
    check("jacobian O r=3", lambda: charclass.jacobian_certificate(3, "O").ok)
    check("jacobian SO r=4", lambda: charclass.jacobian_certificate(4, "SO").ok)
    check("quillen regularity n=11 to 20",
          lambda: all(quillen.quillen_dim(11, d) >= 0 for d in range(21)))
    check("spin11 degree-32 comparison",
          lambda: quillen.spin11_compare().D_dR_lower == quillen.spin11_compare().D_top + 1)
    failures = [name for name, ok in checks if not ok]
    print(f"{len(checks) - len(failures)}/{len(checks)} selftests passed")
    return 0 if not failures else 1


# -- parser ------------------------------------------------------------

def _cache(args) -> ResultCache:
    policy = "off" if args.no_cache else ("refresh" if args.refresh_cache else "use")
    return ResultCache(default_cache_dir(), policy)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modp",
        description="Exact modular invariant theory and characteristic-class "
                    "calculus at small primes.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--csv", action="store_true", help="emit CSV where tabular")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--refresh-cache", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def group_args(p):
        p.add_argument("--family", required=True)
        p.add_argument("--rank", type=int)

    p = sub.add_parser("degrees", parents=[common], help="fundamental degrees")
    group_args(p)
    p.set_defaults(fn=cmd_degrees)
    p = sub.add_parser("primes", parents=[common], help="bad and torsion primes")
    group_args(p)
    p.set_defaults(fn=cmd_primes)
    p = sub.add_parser("weyl", parents=[common], help="Weyl group order and lengths")
    group_args(p)
    p.set_defaults(fn=cmd_weyl)
    p = sub.add_parser("flag-poincare", parents=[common],
                       help="Poincare polynomial of G/B")
    group_args(p)
    p.set_defaults(fn=cmd_flag_poincare)

    p = sub.add_parser("invariants", parents=[common],
                       help="verify a claimed invariant-ring presentation")
    p.add_argument("--group", default="spin", choices=["spin", "nakajima", "classical"])
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--family")
    p.add_argument("--rank", type=int)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--max-degree", type=int, default=10)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("inv2-check", parents=[common],
                       help="invariants of x -> x+a equal R[x(x+a)]")
    p.add_argument("--max-degree", type=int, default=8)
    p.set_defaults(fn=cmd_inv2_check)

    p = sub.add_parser("ring", parents=[common], help="cataloged presentations")
    p.add_argument("--name", required=True, choices=sorted(_RING_BUILDERS))
    p.add_argument("--n", type=int)
    p.add_argument("--series-to", type=int, default=20)
    p.set_defaults(fn=cmd_ring)

    p = sub.add_parser("whitney", parents=[common], help="u-class direct sum")
    p.add_argument("--e", required=True, help="JSON u-class")
    p.add_argument("--f", required=True, help="JSON u-class")
    p.set_defaults(fn=cmd_whitney)

    p = sub.add_parser("restrict", parents=[common],
                       help="restriction images of the u-classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", default="bo2r", choices=["bo2r", "K"])
    p.set_defaults(fn=cmd_restrict)

    p = sub.add_parser("jacobian", parents=[common], help="injectivity certificate")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--variant", default="O", choices=["O", "SO"])
    p.set_defaults(fn=cmd_jacobian)

    p = sub.add_parser("quillen", parents=[common],
                       help="dimensions of H*(BSpin(n); F_2)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dims", default="0..20", help="degree or range, e.g. 0..34")
    p.set_defaults(fn=cmd_quillen)

    p = sub.add_parser("spin-compare", parents=[common],
                       help="the degree-32 Spin(11) comparison")
    p.set_defaults(fn=cmd_spin_compare)

    p = sub.add_parser("selftest", parents=[common], help="quick verification battery")
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.time()
    code = args.fn(args)
    if getattr(args, "verbose", False):
        print(f"modp: {args.command} finished in {time.time() - t0:.2f}s",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
