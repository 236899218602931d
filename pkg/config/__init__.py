# Configuration de tcilab: tolérances, grilles, budgets et options de sortie
from config.settings import Settings, get_settings
