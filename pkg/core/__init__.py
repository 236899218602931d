# Gestionnaire de la ligne de commande: répartition des sous-commandes et codes de sortie
from core.app_manager import AppManager, ExitCode, build_parser
