import logging
from app.core.config import settings


def setup_logging(level: str | None = None):
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
    )
    logger = logging.getLogger(settings.PROJECT_NAME)
    return logger


logger = setup_logging()
