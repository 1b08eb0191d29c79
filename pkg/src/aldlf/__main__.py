from aldlf.cli import main
import sys

sys.exit(main())
