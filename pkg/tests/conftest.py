import sys
from pathlib import Path

try:
    import symsim  # noqa: F401
except ImportError:
    # allow running the suite from a source checkout without installing
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
