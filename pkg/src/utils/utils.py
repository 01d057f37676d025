"""
Утилиты: склонение счётчиков в логах и вывод зерён генератора
"""

_MASK64 = (1 << 64) - 1


def pluralize(number: int, one: str, few: str, many: str) -> str:
    """
    Склоняет существительное в зависимости от числа

    Args:
        number: число
        one: форма для 1, 21, 31, ... (например, "шаг", "пара")
        few: форма для 2-4, 22-24, ... (например, "шага", "пары")
        many: форма для 5-20, 25-30, ... (например, "шагов", "пар")

    Returns:
        Строка с правильно склоненным существительным

    Examples:
        >>> pluralize(1, "шаг", "шага", "шагов")
        'шаг'
        >>> pluralize(3, "шаг", "шага", "шагов")
        'шага'
        >>> pluralize(12, "шаг", "шага", "шагов")
        'шагов'
    """
    mod10 = number % 10
    mod100 = number % 100

    # 11-14 всегда во множественном родительном
    if 11 <= mod100 <= 14:
        return many
    if mod10 == 1:
        return one
    if 2 <= mod10 <= 4:
        return few
    return many


def format_number_with_noun(number: int, one: str, few: str, many: str) -> str:
    """
    Форматирует число с правильно склоненным существительным

    Examples:
        >>> format_number_with_noun(21, "пара", "пары", "пар")
        '21 пара'
    """
    return f"{number} {pluralize(number, one, few, many)}"


def _splitmix64(state: int) -> int:
    z = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """
    Выводит независимое зерно для элемента с номером index из мастер-зерна

    Результат зависит только от (master, index), поэтому генерация
    по элементам не зависит от порядка обработки.

    Args:
        master: мастер-зерно
        index: номер элемента (изображения, шага обучения)

    Returns:
        Зерно в диапазоне [0, 2**63)
    """
    mixed = _splitmix64((master & _MASK64) ^ _splitmix64(index & _MASK64))
    return mixed >> 1
