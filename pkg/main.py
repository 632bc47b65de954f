import os
import sys

# Ajouter le chemin du projet
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from twrn_ce.cli import main

if __name__ == "__main__":
    sys.exit(main())
