"""hq - exact computations in the Hopf algebra H = k_q[x, x^-1, y]"""

import sys

from cli import main

if __name__ == "__main__":
    sys.exit(main())
