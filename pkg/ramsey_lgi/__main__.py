import sys

from ramsey_lgi.cli import main

if __name__ == "__main__":
    sys.exit(main())
