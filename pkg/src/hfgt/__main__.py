import sys

from hfgt.cli import main

sys.exit(main())
