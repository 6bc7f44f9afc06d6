import sys

from bepeval.cli import main

sys.exit(main())
