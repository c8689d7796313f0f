"""Write the figure fixtures from their hand translations in qdg.figures."""

import argparse
from pathlib import Path

from qdg.figures import FIXTURES, fixture_text

ROOT = Path(__file__).resolve().parents[1] / "src" / "qdg" / "fixtures"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="fail if a stored file differs")
    args = ap.parse_args()
    stale = []
    for name in FIXTURES:
        path = ROOT / f"{name}.json"
        text = fixture_text(name)
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                stale.append(name)
        else:
            path.write_text(text, encoding="utf-8")
            print("wrote", path)
    if stale:
        raise SystemExit("stale fixtures: " + ", ".join(stale))


if __name__ == "__main__":
    main()
