import sys

from multicss.cli import main

sys.exit(main())
