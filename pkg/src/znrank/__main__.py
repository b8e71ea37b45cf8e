import sys

from znrank.cli import main

sys.exit(main())
