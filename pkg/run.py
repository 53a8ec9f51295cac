"""Command-line entry point."""
from groupoid_qm.cli import main

if __name__ == '__main__':
    main()
