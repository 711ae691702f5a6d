import sys

from spinchain.cli import main

sys.exit(main())
