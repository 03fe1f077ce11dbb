import sys

from granulab.cli import main

sys.exit(main())
