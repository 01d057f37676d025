"""
Команды: synth, train, infer, eval, metrics
"""
import argparse
import dataclasses
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from src.config import (
    DEFAULT_ANGLE_MAX,
    DEFAULT_ANGLE_MIN,
    DEFAULT_KERNEL_MAX,
    DEFAULT_KERNEL_MIN,
    DEFAULT_NOISE_SIGMA,
    DEFAULT_SEED,
    DEFAULT_SYNTH_COUNT,
    DEFAULT_SYNTH_SIZE,
    EXIT_OK,
    EXIT_RUNTIME_ERROR,
    EXIT_USAGE_ERROR,
    MANIFEST_FILENAME,
    MAX_MOTION_LENGTH,
    REPORT_BASELINE_ID,
)
from src.data import (
    generate_synthetic_dataset,
    load_checkpoint,
    load_manifest,
    load_pairs,
    load_png,
    save_png,
    to_luminance,
)
from src.errors import ConfigError, LapDeblurError, UsageError
from src.imgproc import ColorSpace, Image, lab_recompose, rgb_to_lab, rgb_to_luminance
from src.metrics import MetricReport, SsimParams, evaluate, measure
from src.model import deblur_luminance
from src.cli.config_file import load_train_config
from src.training import TrainConfig, train
from src.utils import format_number_with_noun

logger = logging.getLogger(__name__)

CONFIG_HELP = """\
Формат файла --config: строки key=value, '#' начинает комментарий.
Ключи и значения по умолчанию:
  num_rdbs=8 convs_per_rdb=6 growth=32 base_channels=64
  w_l2=1.0 w_el=0.05
  lr=1e-4 beta1=0.9 beta2=0.999 epsilon=1e-8 decay=5e-5
  patch_size=256 batch_size=4 steps=1000 seed=0 augment=true
  checkpoint_every=100 log_every=10 passthrough_init=false
Коды выхода: 0 успех, 1 ошибка выполнения, 2 ошибка аргументов или конфигурации.
"""


def center_crop(plane: np.ndarray, size: Optional[int]) -> np.ndarray:
    """Центральный вырез size x size; стороны меньше size не обрезаются"""
    if size is None:
        return plane
    h, w = plane.shape
    ch, cw = min(size, h), min(size, w)
    top, left = (h - ch) // 2, (w - cw) // 2
    return plane[top:top + ch, left:left + cw]


def _select_pairs(args):
    """Пары манифеста по --offset и --limit; пустая выборка считается ошибкой аргументов"""
    if args.offset < 0:
        raise UsageError(f"--offset должен быть >= 0, получено {args.offset}")
    if args.limit is not None and args.limit < 1:
        raise UsageError(f"--limit должен быть >= 1, получено {args.limit}")
    manifest = load_manifest(args.data)
    selected = manifest.select(args.offset, args.limit)
    if not selected.entries:
        raise UsageError(f"--offset {args.offset} не оставляет ни одной пары: в датасете {len(manifest)}")
    return load_pairs(selected)


def cmd_synth(args) -> int:
    if args.count < 1:
        raise UsageError(f"--count должен быть >= 1, получено {args.count}")
    if not 1 <= args.kernel_min <= args.kernel_max <= MAX_MOTION_LENGTH:
        raise UsageError(f"Длины ядра должны удовлетворять 1 <= min <= max <= {MAX_MOTION_LENGTH}")
    if args.angle_min > args.angle_max:
        raise UsageError("--angle-min больше --angle-max")
    if args.noise_sigma < 0:
        raise UsageError("--noise-sigma должен быть неотрицательным")
    if args.size < 1:
        raise UsageError("--size должен быть >= 1")

    manifest = generate_synthetic_dataset(
        args.out, args.count, args.seed,
        kernel_range=(args.kernel_min, args.kernel_max),
        angle_range=(args.angle_min, args.angle_max),
        noise_sigma=args.noise_sigma,
        size=(args.size, args.size),
        base_images=args.base_images,
    )
    print(manifest.root / MANIFEST_FILENAME)
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = load_train_config(args.config) if args.config else TrainConfig()
    pairs = _select_pairs(args)
    result = train(pairs, cfg, args.out, resume=args.resume)
    print(result.checkpoint_path)
    return EXIT_OK


def cmd_infer(args) -> int:
    image = load_png(args.input)
    is_color = image.color_space == ColorSpace.SRGB_8BIT_SCALED
    if args.color and not is_color:
        raise UsageError(f"--color: {args.input} в оттенках серого, плоскостей a*, b* нет")

    params = load_checkpoint(args.ckpt).params
    lum = rgb_to_luminance(image) if is_color else image
    restored = deblur_luminance(params, lum)
    if args.color:
        restored = lab_recompose(restored, rgb_to_lab(image))
    save_png(restored, args.output)
    logger.info(f"Результат сохранён в {args.output}")
    return EXIT_OK


def cmd_eval(args) -> int:
    """
    Восстанавливает размытые изображения датасета и сравнивает их с чёткими

    В отчёт кроме строк по изображениям и средней попадает строка
    baseline_blurred: средние метрики необработанного размытого входа.
    """
    if args.crop is not None and args.crop < 1:
        raise UsageError(f"--crop должен быть >= 1, получено {args.crop}")

    pairs = _select_pairs(args)
    params = load_checkpoint(args.ckpt).params
    logger.info(f"Оценка: {format_number_with_noun(len(pairs), 'пара', 'пары', 'пар')}")

    ssim_params = SsimParams()
    restored_pairs, baseline_rows = [], []
    for pair in pairs:
        restored = deblur_luminance(params, Image.luminance(pair.blurred)).array
        sharp = center_crop(pair.sharp, args.crop)
        restored_pairs.append((pair.id, center_crop(restored, args.crop), sharp))
        baseline_rows.append(measure(pair.id, center_crop(pair.blurred, args.crop), sharp, ssim_params))

    report = evaluate(restored_pairs, ssim_params)
    report.baseline = dataclasses.replace(MetricReport(baseline_rows).mean, id=REPORT_BASELINE_ID)

    report_path = Path(args.report)
    report_path.parent.mkdir(parents=True, exist_ok=True)
    report_path.write_text(report.to_csv(), encoding="utf-8")
    print(report.to_table())
    logger.info(f"Отчёт записан в {report_path}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    reference = to_luminance(load_png(args.ref)).array
    test = to_luminance(load_png(args.test)).array
    if reference.shape != test.shape:
        raise UsageError(f"Размеры не совпадают: {args.ref} {reference.shape}, {args.test} {test.shape}")
    row = measure(Path(args.test).stem, test, reference)
    print(MetricReport([row]).to_csv(include_mean=False), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapdeblur",
        description="Устранение размытия по каналу светлоты: RDN с Лапласианом на входе",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="команда")

    synth = commands.add_parser("synth", help="сгенерировать синтетический датасет размытых пар")
    synth.add_argument("--out", required=True, help="каталог датасета")
    synth.add_argument("--count", type=int, default=DEFAULT_SYNTH_COUNT, help="число пар")
    synth.add_argument("--seed", type=int, default=DEFAULT_SEED, help="мастер-зерно")
    synth.add_argument("--kernel-min", type=int, default=DEFAULT_KERNEL_MIN, help="минимальная длина ядра движения")
    synth.add_argument("--kernel-max", type=int, default=DEFAULT_KERNEL_MAX, help="максимальная длина ядра движения")
    synth.add_argument("--angle-min", type=float, default=DEFAULT_ANGLE_MIN, help="минимальный угол, градусы")
    synth.add_argument("--angle-max", type=float, default=DEFAULT_ANGLE_MAX, help="максимальный угол, градусы")
    synth.add_argument("--noise-sigma", type=float, default=DEFAULT_NOISE_SIGMA, help="СКО гауссова шума")
    synth.add_argument("--size", type=int, default=DEFAULT_SYNTH_SIZE, help="сторона процедурных сцен")
    synth.add_argument("--base-images", nargs="+", type=Path, help="собственные чёткие PNG вместо сцен")
    synth.set_defaults(handler=cmd_synth)

    train_cmd = commands.add_parser("train", help="обучить модель",
                                    epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    train_cmd.add_argument("--data", required=True, help="корень датасета")
    train_cmd.add_argument("--config", help="файл key=value с параметрами обучения")
    train_cmd.add_argument("--out", required=True, help="каталог для model.ldbn и train_log.csv")
    train_cmd.add_argument("--resume", action="store_true", help="продолжить с чекпоинта в --out")
    train_cmd.add_argument("--offset", type=int, default=0, help="пропустить первые N пар манифеста")
    train_cmd.add_argument("--limit", type=int, help="взять не больше N пар")
    train_cmd.set_defaults(handler=cmd_train)

    infer = commands.add_parser("infer", help="восстановить одно изображение")
    infer.add_argument("--ckpt", required=True, help="чекпоинт модели")
    infer.add_argument("--input", required=True, help="размытый PNG")
    infer.add_argument("--output", required=True, help="куда сохранить результат")
    infer.add_argument("--color", action="store_true", help="собрать цветной результат с a*, b* входа")
    infer.set_defaults(handler=cmd_infer)

    eval_cmd = commands.add_parser("eval", help="оценить модель на датасете")
    eval_cmd.add_argument("--ckpt", required=True, help="чекпоинт модели")
    eval_cmd.add_argument("--data", required=True, help="корень датасета")
    eval_cmd.add_argument("--report", required=True, help="куда записать csv-отчёт")
    eval_cmd.add_argument("--crop", type=int, help="сравнивать центральные вырезы N x N")
    eval_cmd.add_argument("--offset", type=int, default=0, help="пропустить первые N пар манифеста")
    eval_cmd.add_argument("--limit", type=int, help="взять не больше N пар")
    eval_cmd.set_defaults(handler=cmd_eval)

    metrics = commands.add_parser("metrics", help="PSNR, SSIM и MS-SSIM двух изображений")
    metrics.add_argument("--ref", required=True, help="эталонное изображение")
    metrics.add_argument("--test", required=True, help="сравниваемое изображение")
    metrics.set_defaults(handler=cmd_metrics)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Разбор аргументов и запуск команды

    Returns:
        0 при успехе, 1 при ошибке выполнения, 2 при ошибке аргументов или конфигурации
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE_ERROR

    try:
        return args.handler(args)
    except (ConfigError, UsageError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE_ERROR
    except (LapDeblurError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_RUNTIME_ERROR
