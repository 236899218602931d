#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Point d'entrée principal de tcilab.
Analyse la ligne de commande, configure la journalisation et lance la sous-commande.
"""

import logging
import os
import sys
from typing import List, Optional

from config.settings import Settings, get_settings
from core.app_manager import AppManager, ExitCode, build_parser
from measures.errors import ConfigError

logger = logging.getLogger("tcilab")


def configure_logging(level: str):
    """Journal dans logs/tcilab.log et sur la sortie d'erreur"""
    os.makedirs("logs", exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler("logs/tcilab.log"),
            logging.StreamHandler()
        ],
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Fonction principale; renvoie le code de sortie"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse sort avec 2 sur une erreur d'usage, réservé ici aux inégalités falsifiées
        return int(ExitCode.ERROR) if e.code else int(ExitCode.SUCCESS)

    if args.config:
        try:
            Settings(args.config, strict=True)
        except ConfigError as e:
            configure_logging(args.log_level or "INFO")
            logger.error(f"ConfigError: {e}")
            return int(ExitCode.ERROR)
        os.environ["TCILAB_CONFIG"] = args.config
        get_settings.cache_clear()
    settings: Settings = get_settings()
    configure_logging(args.log_level or settings.log_level)
    logger.info(f"Configuration chargée depuis {settings.config_file}")

    try:
        return AppManager(settings).run(args)
    except Exception as e:
        logger.exception(f"Erreur fatale: {e}")
        return int(ExitCode.ERROR)


if __name__ == "__main__":
    sys.exit(main())
