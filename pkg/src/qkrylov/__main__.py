"""Allow ``python -m qkrylov``."""

import sys

from .cli import main

sys.exit(main())
