import sys

from saxn.cli import main

sys.exit(main())
