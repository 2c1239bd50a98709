import sys

from tablesmith.main import dispatch

sys.exit(dispatch())
