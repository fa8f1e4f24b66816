#!/usr/bin/env python3
"""
Lattice Scope - Setup and Packaging
Helper commands for checking a checkout (deps, config, selftest, help);
every other invocation is handed to setuptools, so `pip install .` works.
"""

import os
import subprocess
import sys

HELPER_COMMANDS = ('deps', 'config', 'selftest', 'help')

INSTALL_REQUIRES = ['numpy>=1.24', 'scipy>=1.11', 'mpmath>=1.3']
TEST_REQUIRES = ['pytest>=7.4', 'hypothesis>=6.80', 'sympy>=1.12']


def main():
    """Setup and configuration helper"""

    if len(sys.argv) < 2:
        print("""
🔧 Lattice Scope - Setup

Usage:
  python3 setup.py [command]

Commands:
  deps        - Check runtime and test dependencies
  config      - Show active configuration (environment overrides)
  selftest    - Run the test suite (add 'all' to include slow tests)
  help        - Show detailed help

Any other command (install, sdist, bdist_wheel, ...) goes to setuptools.

Examples:
  python3 setup.py deps
  python3 setup.py selftest
  pip install .[test]
        """)
        return

    command = sys.argv[1].lower()

    if command == "deps":
        check_dependencies()
    elif command == "config":
        check_configuration()
    elif command == "selftest":
        sys.exit(run_selftest(sys.argv[2:]))
    elif command == "help":
        show_detailed_help()
    else:
        package()


def package():
    from setuptools import find_packages, setup

    setup(
        name='lattice-scope',
        version='1.0.0',
        description='Euler totient sieves and lattice-point visibility: densities, hidden blocks, covers',
        packages=find_packages(include=['lattice_scope', 'lattice_scope.*']),
        python_requires='>=3.10',
        install_requires=INSTALL_REQUIRES,
        extras_require={'test': TEST_REQUIRES},
        entry_points={'console_scripts': ['lattice-scope=lattice_scope.cli:main']},
    )


def check_dependencies():
    """Check required dependencies"""
    print("📦 Checking Python dependencies...")

    for requirement in INSTALL_REQUIRES + TEST_REQUIRES:
        package_name = requirement.split('>=')[0]
        try:
            module = __import__(package_name)
            print(f"  ✅ {package_name} {getattr(module, '__version__', '')} - installed")
        except ImportError:
            print(f"  ❌ {package_name} - missing")
            print(f"     Install with: pip install '{requirement}'")


def check_configuration():
    """Show configuration and environment overrides"""
    print("🔍 Checking configuration...\n")

    print("📁 Directory Structure:")
    for dir_name in ['lattice_scope', 'tests', 'reports']:
        marker = '✅' if os.path.isdir(dir_name) else '❌'
        print(f"  {marker} {dir_name}/")

    from lattice_scope.config import LOGGING_CONFIG, OUTPUT_CONFIG, SCAN_CONFIG

    print("\n🔧 Active Configuration:")
    for title, config in (('SCAN_CONFIG', SCAN_CONFIG), ('OUTPUT_CONFIG', OUTPUT_CONFIG),
                          ('LOGGING_CONFIG', LOGGING_CONFIG)):
        print(f"  {title}")
        for key, value in config.items():
            print(f"    {key}: {value!r}")

    overrides = sorted(name for name in os.environ if name.startswith('LATTICE_SCOPE_'))
    if overrides:
        print("\n  Environment overrides: " + ', '.join(overrides))
    else:
        print("\n  ⚠️  No LATTICE_SCOPE_* overrides set (defaults in use)")


def run_selftest(extra):
    """Run pytest; slow tests only when asked"""
    print("🧪 Running test suite...\n")
    args = [sys.executable, '-m', 'pytest', 'tests']
    if 'all' in extra:
        extra = [a for a in extra if a != 'all']
    else:
        args += ['-m', 'not slow']
    result = subprocess.run(args + extra)
    print("\n✅ All tests passed" if result.returncode == 0 else "\n❌ Test failures (see above)")
    return result.returncode


def show_detailed_help():
    """Show detailed help and usage"""
    print("""
📖 Lattice Scope - Detailed Help

DIRECTORY STRUCTURE:
  lattice_scope/            - Library and CLI
  tests/                    - pytest suite
  reports/                  - Generated CSV series

MAIN COMMANDS:

  lattice-scope totient-sum --x 100000
    - Phi(x) against 3x^2/pi^2 and the x ln x error scale

  lattice-scope density --n 10000
    - Visible fraction of [1,n]^2 against 6/pi^2

  lattice-scope cover-greedy --n 100
    - Greedy visibility cover of {0..n}^2 with bound report

  lattice-scope exceptional-scan --n 2000
    - Points no point of the explicit B_n sees

  ./start_convergence_report.sh
    - Writes density and Phi(x) series to reports/

CONFIGURATION (environment variables):

  LATTICE_SCOPE_BUDGET            - work cap for d-dimensional scans and series
  LATTICE_SCOPE_SIEVE_CAP         - largest sieve limit
  LATTICE_SCOPE_EXCEPTIONAL_POINTS - largest grid for a full exceptional scan
  LATTICE_SCOPE_LOG_LEVEL         - DEBUG, INFO, WARNING, ...
  LATTICE_SCOPE_LOG_FILE          - also log to this file
  LATTICE_SCOPE_REPORTS_DIR       - where batch series are written

TROUBLESHOOTING:

  • Exit status 2: bad arguments (see the message on stderr)
  • Exit status 1: a scan hit its work cap; the message names the alternative
  • Import errors: python3 setup.py deps
    """)


if __name__ == "__main__":
    main()
