import sys

from monotri.cli import main

sys.exit(main())
