from spindex.cli import main
import sys

sys.exit(main())
