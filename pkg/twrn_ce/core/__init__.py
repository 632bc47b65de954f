# Configuration du core
