"""Run every exit criterion and print one PASS/FAIL line each."""

import argparse
import sys

from gaborlab import acceptance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--filter", help="only criteria tagged with this module")
    args = ap.parse_args()
    results = acceptance.run(args.filter)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
