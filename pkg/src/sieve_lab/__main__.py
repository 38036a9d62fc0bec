import sys

from sieve_lab.cli import main

sys.exit(main())
