"""Allow ``python -m qhopf``."""

import sys

from .cli import main

sys.exit(main())
