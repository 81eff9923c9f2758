import sys
from pathlib import Path

# allow running the suite from a fresh checkout without installing
try:
    import cauchymimo  # noqa: F401
except ImportError:
    sys.path.insert(0, str(Path(__file__).parent / "src"))
