import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import settings

# the brute-force oracles are slow per example on one core
settings.register_profile("default", deadline=None)
settings.load_profile("default")
