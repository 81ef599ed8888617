#!/usr/bin/env python3
"""Bounds between one tower carrying two weight sequences that agree on prefixes."""

import sys

from afprop.cli import main

if __name__ == "__main__":
    sys.exit(main(["sweep", "--kind", "beta-continuity"] + sys.argv[1:]))
