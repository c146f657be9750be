import os
import sys

# the oracles module lives beside the tests; make it importable no matter
# which directory pytest is launched from
sys.path.insert(0, os.path.dirname(__file__))
