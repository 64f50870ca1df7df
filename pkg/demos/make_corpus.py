"""Write the determinism corpus as instance JSON files.

Usage: python demos/make_corpus.py [output-directory]
"""

from __future__ import annotations

import sys
from pathlib import Path

from uflpmc.battery import write_corpus


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "corpus"
    for path in write_corpus(out):
        print(path)


if __name__ == "__main__":
    main()
