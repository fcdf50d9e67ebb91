import os
import sys

# Make `src` importable as a package from the repository root
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
