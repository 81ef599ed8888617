#!/usr/bin/env python3
"""Chain bounds between continued-fraction towers as the shared prefix grows.

The table tracks the certified chain bound, its grid component and the raw
sampled seminorm gap; the sampled gap is the quantity that actually decays
with the parameter distance.
"""

import sys

from afprop.cli import main

if __name__ == "__main__":
    sys.exit(main(["sweep", "--kind", "es-continuity"] + sys.argv[1:]))
