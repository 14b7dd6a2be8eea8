import os
import sys
import unittest


def run() -> None:
    loader = unittest.TestLoader()
    tests = loader.discover(
        os.path.dirname(__file__),
        pattern="test_*.py",
        top_level_dir=os.path.dirname(os.path.dirname(os.path.dirname(__file__))),
    )
    test_runner = unittest.runner.TextTestRunner(verbosity=2)
    print(f"Running filtersem tests with python {sys.version}", file=sys.stderr)
    result = test_runner.run(tests)
    if not result.wasSuccessful():
        sys.exit(1)


if __name__ == "__main__":
    run()
