"""
Метрики качества изображений
"""
from .quality import SsimParams, available_scales, gaussian_window, ms_ssim, psnr, ssim, ssim_maps
from .report import MetricReport, MetricRow, evaluate, measure

__all__ = [
    'SsimParams', 'available_scales', 'gaussian_window', 'ms_ssim', 'psnr', 'ssim', 'ssim_maps',
    'MetricReport', 'MetricRow', 'evaluate', 'measure',
]
