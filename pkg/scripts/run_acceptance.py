"""Print the acceptance report (one PASS/FAIL line per criterion)."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from test_acceptance import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
