"""Print the table of maximal counts next to the reference values and run
the r=6 scan for the unrealised polynomial.

usage: python scripts/reproduce_table.py [OUT]
"""
import sys
from pathlib import Path

from smallspan.report import missing_poly_scan, verify_table1


def main() -> int:
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "out")
    ok, md = verify_table1(out)
    print(md)
    print("table:", "match" if ok else "MISMATCH")
    clean, lines = missing_poly_scan(out, 6)
    print("\n".join(lines))
    return 0 if ok and clean else 1


if __name__ == "__main__":
    sys.exit(main())
