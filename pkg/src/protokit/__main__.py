import sys

from protokit.cli import main

sys.exit(main())
