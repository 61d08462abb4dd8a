import sys
from pathlib import Path

# Tests import shared oracles/helpers as plain modules.
sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent.parent / "fixtures"
