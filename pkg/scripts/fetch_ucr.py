"""Populate data/ucr/ with the five benchmark datasets.

The UCR archive hosts are not always reachable, so the files are pulled out of
two PyPI wheels that vendor them: ``ucr-datasets`` (ECG200, Coffee, BeetleFly,
BirdChicken, tab-separated) and ``pyts`` (GunPoint, whitespace-separated).

    python scripts/fetch_ucr.py [--dest data/ucr]
"""

import argparse
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

SOURCES = {
    "ucr-datasets==0.0.6": {
        f"ucr_datasets/data/{name}_{split}.tsv": f"{name}/{name}_{split}.tsv"
        for name in ("ECG200", "Coffee", "BeetleFly", "BirdChicken")
        for split in ("TRAIN", "TEST")
    },
    "pyts==0.13.0": {
        f"pyts/datasets/cached_datasets/UCR/GunPoint/GunPoint_{split}.txt": f"GunPoint/GunPoint_{split}.txt"
        for split in ("TRAIN", "TEST")
    },
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", type=Path, default=Path(__file__).resolve().parents[1] / "data" / "ucr")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        for requirement, members in SOURCES.items():
            subprocess.run(
                [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary", ":all:", "-d", tmp, requirement],
                check=True,
            )
            dist = requirement.split("==")[0].replace("-", "_")
            wheel = next(Path(tmp).glob(f"{dist}-*.whl"))
            with zipfile.ZipFile(wheel) as zf:
                for member, rel in members.items():
                    out = args.dest / rel
                    out.parent.mkdir(parents=True, exist_ok=True)
                    out.write_bytes(zf.read(member))
                    print(f"wrote {out}")


if __name__ == "__main__":
    main()
