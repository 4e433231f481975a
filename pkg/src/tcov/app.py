from __future__ import annotations

import argparse
import logging
from typing import Optional, Sequence

from .core.settings import get_settings
from .presentation import cli


def create_app() -> argparse.ArgumentParser:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    return cli.build_parser()


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        parser = create_app()
    except ValueError as exc:
        logging.getLogger("tcov").error("%s", exc)
        return cli.USAGE_ERROR
    return cli.run(argv, parser=parser)
