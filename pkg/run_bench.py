#!/usr/bin/env python3
"""Script to run the BayesWalk command-line bench."""

from src.bench.cli import main

if __name__ == "__main__":
    main()
