import sys

from tlsnoise.cli import main

sys.exit(main())
