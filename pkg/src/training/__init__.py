"""
Обучение: функция потерь WEL, Adam и цикл обучения
"""
from .loss import LossParts, LossWeights, edge_loss, l2_loss, wel_loss, wel_loss_parts
from .optimizer import AdamState, adam_step
from .train_log import TrainLog, TrainRecord
from .train_config import TrainConfig
from .trainer import PatchPool, Trainer, TrainResult, build_patch_pool, train

__all__ = [
    'LossParts', 'LossWeights', 'edge_loss', 'l2_loss', 'wel_loss', 'wel_loss_parts',
    'AdamState', 'adam_step',
    'TrainLog', 'TrainRecord',
    'TrainConfig',
    'PatchPool', 'Trainer', 'TrainResult', 'build_patch_pool', 'train',
]
