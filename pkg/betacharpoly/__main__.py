import sys

from betacharpoly.cli import main

sys.exit(main())
