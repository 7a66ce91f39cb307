"""Command line interface: `levelone <command> ...` or `python -m levelone`."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import arthur, pipeline, rootsys, searches
from .basecounts import ORTHOGONAL, SYMPLECTIC
from .cyclo import NonIntegral
from .degwcf import engine, harmonic_closed_form
from .groupdata import (DATASET_FILES, DataError, all_datasets_from_e8, data_dir, e8_census,
                        enumerate_e7_plus, enumerate_g2, harmonic_series_from_classes, load_dataset,
                        verify_dataset)

DIM_GROUPS = ("E7+", "E8+", "E8so9", "G2")
TABLE_GROUPS = ("SO7", "SO8", "SO9", "G2")
_DATASET_TO_GROUP = {"E7+": "SO7", "E8+": "SO8", "E8so9": "SO9", "G2": "G2"}


def _ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def cmd_dim(args) -> int:
    datum = rootsys.for_group(_DATASET_TO_GROUP[args.group])
    if args.weight_hodge is not None:
        lam = rootsys.weight_from_hodge(datum, args.weight_hodge)
    else:
        lam = args.weight
        if len(lam) != datum.rank or not datum.is_dominant(lam):
            raise ValueError(f"{lam} is not a dominant weight for {datum.label}")
    print(engine(args.group).dim(lam, args.method))
    return 0


def _write_csv(path: Path, rows: dict) -> None:
    pipeline.write_cache(path, rows)


def _count_rows(group: str, tables, max_w1: int) -> dict:
    """Nonzero extracted counts belonging to a group's grid."""
    if group == "G2":
        return {k: v for k, v in tables.g2.items() if v and k[0] + k[1] <= max_w1}
    spec = arthur.group_spec(group)
    duality = SYMPLECTIC if spec.sign == -1 else ORTHOGONAL
    return {l.hodge: v for l, v in tables.counts.items()
            if v and l.n == spec.n and l.duality == duality and l.hodge[0] <= max_w1}


def cmd_tables(args) -> int:
    group = args.group
    limits = pipeline.PipelineLimits()
    needs = {"SO7": ("SO7",), "SO8": ("SO8",), "SO9": ("SO7", "SO9"), "G2": ("G2",)}[group]
    if group == "SO7":
        limits.so7_max_w1 = args.max_w1
    elif group == "SO8":
        limits.so8_max_w1 = limits.so8_zero_max_w1 = args.max_w1
    elif group == "SO9":
        limits.so9_max_w1 = args.max_w1
        limits.so7_max_w1 = max(limits.so7_max_w1, args.max_w1)
    else:
        limits.g2_max_sum = args.max_w1
    try:
        tables = pipeline.build_tables(limits, cache_dir=args.cache_dir, recompute=args.recompute,
                                       groups=needs)
    except arthur.NegativeResidual as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / f"m_{group}.csv", {k: v for k, v in tables.m[group].items()})
    _write_csv(out / f"counts_{group}.csv", _count_rows(group, tables, args.max_w1))
    if group == "SO8":
        _write_csv(out / "combined_SO8.csv", {k: v for k, v in tables.combined.items() if v})
    written = [f"m_{group}.csv", f"counts_{group}.csv"]
    if args.partition:
        records = []
        for w in sorted(tables.m[group]):
            if group == "G2":
                parts = arthur.g2_partition(*w, tables)
            else:
                parts = arthur.endoscopic_partition(arthur.group_spec(group), w, tables)
            if parts:
                records.append({"weights": list(w),
                                "parameters": [{"name": n, "multiplicity": m} for n, m, _ in parts]})
        lines = ",\n".join(json.dumps(r, ensure_ascii=False) for r in records)
        (out / f"partitions_{group}.json").write_text(f"[\n{lines}\n]\n")
        written.append(f"partitions_{group}.json")
    for name in written:
        print(out / name)
    return 0


def cmd_verify(args) -> int:
    ok = True
    for name in args.group or DIM_GROUPS:
        ds = load_dataset(name)
        report = verify_dataset(ds)
        for check, passed in report["checks"]:
            if not passed or args.verbose:
                print(f"{name}: {'PASS' if passed else 'FAIL'} {check}")
        if name != "G2":
            nterms = 29
            ok_h = harmonic_series_from_classes(ds, nterms) == harmonic_closed_form(name, nterms)
            report["ok"] &= ok_h
            print(f"{name}: {'PASS' if ok_h else 'FAIL'} harmonic series to degree {nterms - 1}")
        print(f"{name}: order {ds.order}, {len(ds.buckets)} buckets, {'ok' if report['ok'] else 'FAILED'}")
        ok &= report["ok"]
    return 0 if ok else 1


def cmd_enumerate(args) -> int:
    out = Path(args.out or data_dir())
    out.mkdir(parents=True, exist_ok=True)
    built = {"G2": enumerate_g2(), "E7+": enumerate_e7_plus()}
    if args.expensive:
        t0 = time.time()
        e8 = e8_census(progress=lambda msg: print(f"[{time.time() - t0:6.0f}s] {msg}", file=sys.stderr))
        built.update(all_datasets_from_e8(e8))
    status = 0
    for name, ds in built.items():
        report = verify_dataset(ds)
        path = out / DATASET_FILES[name]
        ds.save(path)
        print(f"{name}: order {ds.order}, {len(ds.buckets)} buckets, "
              f"{'ok' if report['ok'] else 'FAILED'} -> {path}")
        status |= not report["ok"]
    return status


def _tables_for_searches(args):
    return pipeline.build_tables(cache_dir=args.cache_dir, groups=("SO7", "SO9"))


def cmd_borcherds(args) -> int:
    tables = _tables_for_searches(args)
    params = searches.enumerate_so25_trivial(searches.borcherds_blocks(tables))
    mults = searches.multiplicities_so25(params)
    # one line per parameter: a shape with k choices of a label is listed k times
    for p, m in zip(params, mults):
        name = arthur.render(p, tables)
        k = arthur.choice_count(p, tables)
        for i in range(1, k + 1):
            choice = f"{i}/{k}" if k > 1 else ""
            if args.json:
                print(json.dumps({"name": name, "choice": choice, "multiplicity": m}, ensure_ascii=False))
            else:
                print(f"{name}\t{choice}".rstrip())
    return 0


def cmd_search28(args) -> int:
    tables = _tables_for_searches(args)
    for sol in searches.search_tempered_28(tables):
        print(searches.tempered_name(sol, tables))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="levelone", description="Level one automorphic forms for "
                                 "SO7, SO8, SO9 and G2 via invariant dimensions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[common], help="dim V_lambda^G for one weight")
    p.add_argument("--group", choices=DIM_GROUPS, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--weight", type=_ints, help="highest weight n1,n2,...")
    g.add_argument("--weight-hodge", type=_ints, help="Hodge weights (w,v for G2)")
    p.add_argument("--method", choices=("auto", "exact", "numeric"), default="auto")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("tables", parents=[common], help="invariant dimensions and extracted counts as CSV")
    p.add_argument("--group", choices=TABLE_GROUPS, required=True)
    p.add_argument("--max-w1", type=int, required=True, help="largest Hodge weight (w+v for G2)")
    p.add_argument("--out", required=True)
    p.add_argument("--partition", action="store_true", help="also write endoscopic partitions as JSON")
    p.add_argument("--recompute", action="store_true", help="ignore the cache of invariant dimensions")
    p.add_argument("--cache-dir", type=Path, default=None)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", parents=[common], help="check class datasets")
    p.add_argument("--group", choices=DIM_GROUPS, action="append")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", parents=[common], help="rebuild class datasets from generators")
    p.add_argument("--expensive", action="store_true", help="also run the W(E8) census (minutes)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_enumerate)

    for name, func, text in (("borcherds", cmd_borcherds, "SO25 parameters of trivial weight"),
                             ("search28", cmd_search28, "tempered rank 28 parameter")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--cache-dir", type=Path, default=None)
        if name == "borcherds":
            p.add_argument("--json", action="store_true")
        p.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, DataError, NonIntegral) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
