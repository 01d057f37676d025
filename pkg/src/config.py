"""
Конфигурация: значения по умолчанию и фиксированные константы пайплайна
"""

# Архитектура сети (RDN для деблюра). Значения взяты из линейки RDN
# и уменьшены до настольного масштаба
DEFAULT_NUM_RDBS = 8        # число residual dense блоков
DEFAULT_CONVS_PER_RDB = 6   # свёрток внутри блока
DEFAULT_GROWTH = 32         # каналов на каждую свёртку внутри блока
DEFAULT_BASE_CHANNELS = 64  # каналов у неглубоких признаков
KERNEL_SIZE = 3             # фиксировано
INPUT_CHANNELS = 2          # L + Лапласиан(L)

# Пресет для тестов
TEST_PRESET = {
    "num_rdbs": 3,
    "convs_per_rdb": 4,
    "growth": 16,
    "base_channels": 16,
}

# Веса функции потерь WEL = w_l2 * L2 + w_el * EL
DEFAULT_W_L2 = 1.0
DEFAULT_W_EL = 0.05

# Adam
DEFAULT_LR = 1e-4
DEFAULT_BETA1 = 0.9
DEFAULT_BETA2 = 0.999
DEFAULT_EPSILON = 1e-8
DEFAULT_DECAY = 5e-5  # обратно-временное затухание на шаг: lr / (1 + decay * t)

# Обучение
DEFAULT_PATCH_SIZE = 256
DEFAULT_BATCH_SIZE = 4
DEFAULT_STEPS = 1000
DEFAULT_SEED = 0
DEFAULT_AUGMENT = True
DEFAULT_PASSTHROUGH_INIT = False  # старт с сети, возвращающей вход без изменений
DEFAULT_CHECKPOINT_EVERY = 100  # шагов между чекпоинтами
DEFAULT_LOG_EVERY = 10          # шагов между сбросом лога на диск

# Файлы внутри каталога обучения
CHECKPOINT_FILENAME = "model.ldbn"
TRAIN_LOG_FILENAME = "train_log.csv"
TRAIN_LOG_HEADER = ["step", "wel", "l2", "el", "lr", "seconds"]

# Фиксированное ядро Лапласиана
LAPLACIAN_KERNEL = (
    (0.0, -1.0, 0.0),
    (-1.0, 4.0, -1.0),
    (0.0, -1.0, 0.0),
)

# Ядро размытия движением
MAX_MOTION_LENGTH = 31

# Синтетический датасет
DEFAULT_SYNTH_COUNT = 20
DEFAULT_SYNTH_SIZE = 64
DEFAULT_KERNEL_MIN = 5
DEFAULT_KERNEL_MAX = 9
DEFAULT_ANGLE_MIN = 0.0
DEFAULT_ANGLE_MAX = 180.0
DEFAULT_NOISE_SIGMA = 0.01
MANIFEST_FILENAME = "manifest.csv"
MANIFEST_HEADER = ["id", "kernel_len", "kernel_angle", "noise_sigma", "seed"]
SHARP_DIR = "sharp"
BLUR_DIR = "blur"

# Метрики
PSNR_CAP = 99.0          # значение PSNR для идентичных изображений
SSIM_WINDOW_SIZE = 11
SSIM_WINDOW_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_DYNAMIC_RANGE = 1.0
# Веса масштабов MS-SSIM (нормируются к сумме 1 при использовании)
MS_SSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
REPORT_HEADER = ["id", "psnr", "ssim", "ms_ssim"]
REPORT_MEAN_ID = "mean"
REPORT_BASELINE_ID = "baseline_blurred"

# Формат чекпоинта
CHECKPOINT_MAGIC = b"LDBN"
CHECKPOINT_VERSION = 1

# Коды возврата CLI
EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_USAGE_ERROR = 2

# Переменные окружения (см. env_example.txt)
ENV_LOG_LEVEL = "LAPDEBLUR_LOG_LEVEL"
ENV_LOG_FILE = "LAPDEBLUR_LOG_FILE"
