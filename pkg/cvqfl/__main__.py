"""Allow `python -m cvqfl`."""
import sys

from .cli import main

sys.exit(main())
