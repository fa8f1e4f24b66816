"""python -m lattice_scope"""

from .cli import main

main()
