import sys

from .verifyctl import main

sys.exit(main())
