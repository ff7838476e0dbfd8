"""Allow ``python -m deepexport`` to behave like the installed script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
