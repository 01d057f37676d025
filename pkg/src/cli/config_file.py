"""
Файл конфигурации обучения в формате key=value
"""
import logging
from pathlib import Path
from typing import Any, Dict

from src.errors import ConfigError
from src.training import TrainConfig

logger = logging.getLogger(__name__)

_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


def _convert(key: str, raw: str, kind: type, line: int) -> Any:
    if kind is bool:
        lowered = raw.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ConfigError(f"{key}: ожидается true/false, получено '{raw}'", line)
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{key}: не удалось прочитать '{raw}' как {kind.__name__}", line) from None


def parse_train_config(text: str) -> TrainConfig:
    """
    Разбирает текст конфигурации

    Пустые строки и всё после # игнорируются. Неизвестные и повторные
    ключи считаются ошибкой; отсутствующие берут значения по умолчанию.

    Raises:
        ConfigError: с номером строки, в которой найдена ошибка
    """
    kinds = TrainConfig.field_types()
    values: Dict[str, Any] = {}

    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"ожидается key=value, получено '{line}'", number)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in kinds:
            raise ConfigError(f"неизвестный ключ '{key}'", number)
        if key in values:
            raise ConfigError(f"ключ '{key}' указан повторно", number)
        if not raw:
            raise ConfigError(f"{key}: пустое значение", number)
        values[key] = _convert(key, raw, kinds[key], number)

    try:
        return TrainConfig(**values)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def load_train_config(path) -> TrainConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Не удалось прочитать конфигурацию {path}: {e}") from e
    cfg = parse_train_config(text)
    logger.info(f"Конфигурация обучения загружена из {path}")
    return cfg
