import sys

from fsazip.cli import main

sys.exit(main())
