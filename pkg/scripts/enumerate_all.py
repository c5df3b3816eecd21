"""Enumerate every ring of the reference table up to level 9.

Usage: python scripts/enumerate_all.py [OUT] [MAX_N]
Finished levels are kept, so an interrupted run resumes where it stopped.
"""
import logging
import sys
import time
from pathlib import Path

from smallspan.grow import GrowConfig, grow_all

RINGS = (-1, -2, -3, -7, -11, 2, 3, 5)


def main() -> None:
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "out")
    max_n = int(sys.argv[2]) if len(sys.argv) > 2 else 9
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    for d in RINGS:
        t = time.time()
        grow_all(GrowConfig(d=d, max_n=max_n), out, resume=True)
        logging.info("d=%d done in %.0fs", d, time.time() - t)


if __name__ == "__main__":
    main()
