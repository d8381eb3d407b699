import pathlib
import sys

# Allow running the suite from a checkout without installing the package.
SRC = pathlib.Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))
