import sys
from pathlib import Path

# make sibling helper modules importable regardless of invocation directory
sys.path.insert(0, str(Path(__file__).parent))
