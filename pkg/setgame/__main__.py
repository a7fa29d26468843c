import sys

from setgame.cli import main


sys.exit(main())
