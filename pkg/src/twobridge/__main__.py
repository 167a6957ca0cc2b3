import sys

from twobridge.cli import main

sys.exit(main())
