#!/usr/bin/env python3
"""
Test runner for residuum.

    python run_tests.py            full suite, self-test run included
    python run_tests.py --fast     skip tests marked slow
    python run_tests.py -k conductor

Coverage and verbosity come from pytest.ini; other arguments go to pytest unchanged.
"""

import os
import sys
import subprocess
from pathlib import Path


def build_command(argv):
    cmd = [sys.executable, "-m", "pytest"]
    for arg in argv:
        if arg == "--fast":
            cmd.extend(["-m", "not slow"])
        else:
            cmd.append(arg)
    return cmd


def run_tests(argv):
    os.chdir(Path(__file__).parent)

    try:
        import pytest  # noqa: F401
        import hypothesis  # noqa: F401
    except ImportError:
        print("Test requirements missing. Installing test-requirements.txt...")
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "test-requirements.txt"])

    cmd = build_command(argv)
    print(f"Running residuum tests: {' '.join(cmd)}")

    try:
        result = subprocess.run(cmd, check=False)
    except KeyboardInterrupt:
        print("\n🛑 Interrupted")
        return 1

    print("\n" + "=" * 50)
    print("✅ All tests passed" if result.returncode == 0 else f"❌ pytest exited with {result.returncode}")
    print("📊 Coverage report in htmlcov/index.html")
    print("=" * 50)
    return result.returncode


if __name__ == "__main__":
    sys.exit(run_tests(sys.argv[1:]))
