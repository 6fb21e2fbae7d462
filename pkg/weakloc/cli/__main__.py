import sys

from weakloc.cli.main import main

sys.exit(main())
