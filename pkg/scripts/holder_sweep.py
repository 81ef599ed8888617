#!/usr/bin/env python3
"""Prefix/Holder bound table for single-block towers sharing multiplier prefixes."""

import sys

from afprop.cli import main

if __name__ == "__main__":
    sys.exit(main(["sweep", "--kind", "holder"] + sys.argv[1:]))
