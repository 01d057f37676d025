"""
Детерминированный цикл обучения с журналом и чекпоинтами
"""
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from src.config import CHECKPOINT_FILENAME, TRAIN_LOG_FILENAME
from src.data.checkpoint import load_checkpoint, save_checkpoint
from src.data.dataset import ImagePair
from src.errors import CheckpointError, DatasetError, NonFiniteError, TrainingError
from src.imgproc import Image, augment4, extract_patches, laplacian
from src.model import ModelParams, init_params, count_params, rdn_forward
from src.tensor import Tensor, backward
from src.training.loss import wel_loss_parts
from src.training.optimizer import AdamState, adam_step
from src.training.train_config import TrainConfig
from src.training.train_log import TrainLog, TrainRecord
from src.utils import derive_seed, format_number_with_noun

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    params: ModelParams
    state: AdamState
    log: TrainLog
    checkpoint_path: Path


@dataclass(frozen=True)
class PatchPool:
    """Пул обучающих патчей (N, 1, P, P): чёткие, размытые и Лапласиан размытых"""
    sharp: np.ndarray
    blurred: np.ndarray
    lap: np.ndarray

    def __len__(self):
        return self.sharp.shape[0]


def build_patch_pool(pairs: Sequence[ImagePair], patch_size: int, augment: bool) -> PatchPool:
    """
    Нарезает пары сеткой без перекрытия и, при augment, добавляет 4 аугментации каждого патча
    """
    if not pairs:
        raise DatasetError("Обучающий датасет пуст")
    patches = []
    for pair in pairs:
        for patch in extract_patches(pair.sharp, pair.blurred, patch_size, stride=patch_size):
            patches.append(patch)
            if augment:
                patches.extend(augment4(patch))
    sharp = np.stack([p.sharp for p in patches])[:, None]
    blurred = np.stack([p.blurred for p in patches])[:, None]
    lap = np.stack([laplacian(Image.luminance(p.blurred)).array for p in patches])[:, None]
    return PatchPool(sharp, blurred, lap)


class Trainer:
    def __init__(self, pairs: Sequence[ImagePair], cfg: TrainConfig, out_dir, resume: bool = False):
        """
        Инициализация обучения

        Args:
            pairs: обучающие пары
            cfg: конфигурация обучения
            out_dir: каталог для чекпоинта и журнала
            resume: продолжить с чекпоинта в out_dir
        """
        self.cfg = cfg
        self.out_dir = Path(out_dir)
        self.checkpoint_path = self.out_dir / CHECKPOINT_FILENAME
        self.log_path = self.out_dir / TRAIN_LOG_FILENAME
        self.resume = resume
        self.pool = build_patch_pool(pairs, cfg.patch_size, cfg.augment)
        logger.info(f"Пул обучения: {format_number_with_noun(len(self.pool), 'патч', 'патча', 'патчей')} "
                    f"{cfg.patch_size}x{cfg.patch_size}")

    def draw_batch(self, step: int) -> Tuple[Tensor, Tensor, Tensor]:
        """Батч шага step; зерно зависит только от (seed, step), поэтому возобновление воспроизводит батчи"""
        rng = np.random.default_rng(derive_seed(self.cfg.seed, step))
        index = rng.integers(0, len(self.pool), size=self.cfg.batch_size)
        return Tensor(self.pool.blurred[index]), Tensor(self.pool.lap[index]), Tensor(self.pool.sharp[index])

    def _initial_state(self) -> Tuple[ModelParams, AdamState, TrainLog]:
        if not self.resume:
            params = init_params(self.cfg.arch(), self.cfg.seed, passthrough=self.cfg.passthrough_init)
            logger.info(f"Новая модель: {count_params(self.cfg.arch())} параметров")
            return params, self.cfg.new_adam_state(), TrainLog()

        checkpoint = load_checkpoint(self.checkpoint_path, arch=self.cfg.arch())
        if checkpoint.state is None:
            raise CheckpointError(f"В {self.checkpoint_path} нет состояния Adam, возобновление невозможно")
        log = TrainLog.read_csv(self.log_path) if self.log_path.exists() else TrainLog()
        log.truncate(checkpoint.state.t)
        log.write_csv(self.log_path)
        logger.info(f"Возобновление с шага {checkpoint.state.t}")
        return checkpoint.params, checkpoint.state, log

    def _save(self, params: ModelParams, state: AdamState, log: TrainLog) -> Tuple[ModelParams, AdamState]:
        # на границе чекпоинта веса и моменты приводятся к 32 битам и в памяти
        params = params.rounded_to_float32()
        state = state.rounded_to_float32()
        save_checkpoint(params, self.checkpoint_path, state)
        log.flush(self.log_path)
        return params, state

    def run(self) -> TrainResult:
        """
        Запуск цикла: батч -> (L, Лапласиан) -> сеть -> WEL -> обратный проход -> Adam

        Raises:
            TrainingError: функция потерь или градиенты стали не конечными;
                последний корректный чекпоинт остаётся на диске
        """
        self.out_dir.mkdir(parents=True, exist_ok=True)
        params, state, log = self._initial_state()
        weights = self.cfg.loss_weights()
        first_step = state.t + 1
        start = time.perf_counter()

        for step in range(first_step, self.cfg.steps + 1):
            blurred, lap, sharp = self.draw_batch(step)
            try:
                pred = rdn_forward(blurred, lap, params)
                parts = wel_loss_parts(pred, sharp, weights)
                backward(parts.wel)
                grads = {name: tensor.grad if tensor.grad is not None else np.zeros(tensor.shape)
                         for name, tensor in params.tensors.items()}
                lr_used = state.effective_lr(state.t + 1)
                params = adam_step(params, grads, state)
            except NonFiniteError as e:
                log.flush(self.log_path)
                raise TrainingError(f"Шаг {step}: {e}; последний корректный чекпоинт: {self.checkpoint_path}") from e

            record = TrainRecord(step, parts.wel.item(), parts.l2.item(), parts.el.item(),
                                 lr_used, time.perf_counter() - start)
            log.append(record)
            logger.debug(f"Шаг {step}: WEL {record.wel:.6g} (L2 {record.l2:.6g}, EL {record.el:.6g})")

            if step % self.cfg.checkpoint_every == 0 or step == self.cfg.steps:
                params, state = self._save(params, state, log)
                logger.info(f"Шаг {step}/{self.cfg.steps}: WEL {record.wel:.6g}, чекпоинт сохранён")
            elif step % self.cfg.log_every == 0:
                log.flush(self.log_path)
                logger.info(f"Шаг {step}/{self.cfg.steps}: WEL {record.wel:.6g}")

        if first_step > self.cfg.steps:
            params, state = self._save(params, state, log)

        steps_done = max(0, self.cfg.steps - first_step + 1)
        logger.info(f"Обучение завершено: {format_number_with_noun(steps_done, 'шаг', 'шага', 'шагов')} "
                    f"за {time.perf_counter() - start:.1f} с")
        return TrainResult(params, state, log, self.checkpoint_path)


def train(pairs: Sequence[ImagePair], cfg: TrainConfig, out_dir, resume: bool = False) -> TrainResult:
    return Trainer(pairs, cfg, out_dir, resume).run()
