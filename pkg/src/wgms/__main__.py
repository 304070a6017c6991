import sys

from wgms.cli import main

sys.exit(main())
