#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import sys

from src.plugins.cli import main

# Settings come from SEEKER_* environment variables or .env, see
# src/common/config. Presets live in resource/presets:
#
#   python seek.py simulate --config resilience --out out/resilience

if __name__ == "__main__":
    sys.exit(main())
