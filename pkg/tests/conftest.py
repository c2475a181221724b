import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

KINDS = ["pascal", "stirling2", "stirling1", "euler"]
