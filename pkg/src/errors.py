"""
Исключения пайплайна
"""
from typing import Optional


class LapDeblurError(Exception):
    """Базовое исключение проекта"""


class ShapeError(LapDeblurError, ValueError):
    """Несовпадение форм тензоров или изображений"""


class NonFiniteError(LapDeblurError, ArithmeticError):
    """В результате операции появились NaN или Inf"""


class GraphError(LapDeblurError, RuntimeError):
    """Неверное использование графа вычислений"""


class KernelError(LapDeblurError, ValueError):
    """Недопустимые параметры ядра размытия"""


class ImageFormatError(LapDeblurError, ValueError):
    """Неподдерживаемый или повреждённый файл изображения"""


class DatasetError(LapDeblurError, OSError):
    """Проблемы с датасетом: пустой, нет файлов, не совпадают размеры"""


class CheckpointError(LapDeblurError, ValueError):
    """Повреждённый, обрезанный или несовместимый чекпоинт"""


class TrainingError(LapDeblurError, RuntimeError):
    """Обучение остановлено (например, функция потерь стала не конечной)"""


class ConfigError(LapDeblurError, ValueError):
    """Ошибка в файле конфигурации обучения"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"строка {line}: {message}"
        super().__init__(message)


class UsageError(LapDeblurError, ValueError):
    """Недопустимое сочетание аргументов командной строки"""


class ParameterError(LapDeblurError, ValueError):
    """Недопустимое значение параметра функции или конфигурации"""
