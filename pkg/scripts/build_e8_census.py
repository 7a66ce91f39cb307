"""Recompute the W(E8) charpoly census and the derived SO8 / SO9 datasets."""
import argparse
import time
from pathlib import Path

from levelone.groupdata import all_datasets_from_e8, data_dir, e8_census, verify_dataset, DATASET_FILES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=data_dir())
    args = ap.parse_args()
    t0 = time.time()
    e8 = e8_census(progress=lambda msg: print(f"[{time.time() - t0:7.1f}s] {msg}", flush=True))
    for name, ds in all_datasets_from_e8(e8).items():
        ds.save(args.out / DATASET_FILES[name])
        report = verify_dataset(ds)
        print(name, ds.order, len(ds.buckets), "ok" if report["ok"] else report["problems"])


if __name__ == "__main__":
    main()
