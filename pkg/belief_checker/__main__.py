import sys

from belief_checker.cli import main

sys.exit(main())
