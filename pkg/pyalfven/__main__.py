# Standard:
import sys

# Internal:
from .cli import main

sys.exit(main())
