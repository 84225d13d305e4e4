import sys

from leaguerank.cli import main

sys.exit(main())
