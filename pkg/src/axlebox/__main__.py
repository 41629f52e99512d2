import sys

from axlebox.cli import main

sys.exit(main())
