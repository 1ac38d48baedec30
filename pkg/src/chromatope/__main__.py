import sys

from chromatope.cli import main

sys.exit(main())
