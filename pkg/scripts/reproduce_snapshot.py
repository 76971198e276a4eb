#!/usr/bin/env python3
"""Run the full reference experiment against a DBLP dump.

Usage:
    python scripts/reproduce_snapshot.py /path/to/dblp.xml.gz out/

Uses the standard configuration (years 1936-2008, 10,000-pair samples,
1000-replicate bootstrap, 20 percolation steps) with sampled distances; the
exact all-pairs run stays opt-in via the CLI's --force flag.
"""
import sys

from collabnet.config import RunConfig
from collabnet.pipeline import run_pipeline


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__)
        return 2
    corpus, out_dir = sys.argv[1], sys.argv[2]
    import logging

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    manifest = run_pipeline(RunConfig(corpus=corpus, out_dir=out_dir))
    print(f"{len(manifest['artifacts'])} artifacts written to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
