"""
Главный файл для запуска пайплайна устранения размытия
"""
import os
import sys
import logging
from pathlib import Path
from dotenv import load_dotenv

from src.config import ENV_LOG_FILE, ENV_LOG_LEVEL
from src.cli import run

# Определяем базовую директорию проекта (где находится main.py)
BASE_DIR = Path(__file__).parent.absolute()


def setup_logging():
    """Настройка логирования по переменным окружения"""
    handlers = [logging.StreamHandler()]
    log_file = os.getenv(ENV_LOG_FILE)
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    level_name = os.getenv(ENV_LOG_LEVEL, 'INFO').upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=level,
        handlers=handlers
    )
    if level_name != logging.getLevelName(level):
        logging.getLogger(__name__).warning(f"Неизвестный уровень логирования {level_name}, используется INFO")


def main() -> int:
    """Главная функция: окружение, логирование, команда"""
    load_dotenv(dotenv_path=BASE_DIR / '.env')
    setup_logging()
    return run(sys.argv[1:])


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logging.getLogger(__name__).info("Программа завершена пользователем")
        sys.exit(1)
