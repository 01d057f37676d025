"""
Таблица метрик: строки по изображениям, средние и строка размытого входа
"""
import csv
import io
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config import REPORT_BASELINE_ID, REPORT_HEADER, REPORT_MEAN_ID
from src.errors import ParameterError
from src.metrics.quality import ImageLike, SsimParams, ms_ssim, psnr, ssim

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricRow:
    id: str
    psnr: float
    ssim: float
    ms_ssim: float


@dataclass
class MetricReport:
    rows: List[MetricRow]
    baseline: Optional[MetricRow] = None

    @property
    def mean(self) -> MetricRow:
        return MetricRow(REPORT_MEAN_ID,
                         float(np.mean([row.psnr for row in self.rows])),
                         float(np.mean([row.ssim for row in self.rows])),
                         float(np.mean([row.ms_ssim for row in self.rows])))

    def all_rows(self, include_mean: bool = True) -> List[MetricRow]:
        rows = list(self.rows)
        if include_mean:
            rows.append(self.mean)
        if self.baseline is not None:
            rows.append(self.baseline)
        return rows

    def to_csv(self, include_mean: bool = True) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in self.all_rows(include_mean):
            writer.writerow([row.id, f"{row.psnr:.4f}", f"{row.ssim:.6f}", f"{row.ms_ssim:.6f}"])
        return buffer.getvalue()

    def to_table(self) -> str:
        """Выровненная таблица с колонками PSNR, SSIM, MS-SSIM"""
        rows = self.all_rows()
        width = max(len("Image"), *(len(row.id) for row in rows))
        lines = [f"{'Image':<{width}}  {'PSNR':>8}  {'SSIM':>6}  {'MS-SSIM':>7}"]
        for row in rows:
            if row.id == REPORT_MEAN_ID:
                lines.append("-" * len(lines[0]))
            lines.append(f"{row.id:<{width}}  {row.psnr:>8.2f}  {row.ssim:>6.4f}  {row.ms_ssim:>7.4f}")
        return "\n".join(lines)

    @classmethod
    def from_csv(cls, text: str) -> "MetricReport":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != REPORT_HEADER:
            raise ParameterError(f"Неожиданный заголовок отчёта: {reader.fieldnames}")
        rows, baseline = [], None
        for record in reader:
            row = MetricRow(record["id"], float(record["psnr"]), float(record["ssim"]), float(record["ms_ssim"]))
            if row.id == REPORT_BASELINE_ID:
                baseline = row
            elif row.id != REPORT_MEAN_ID:
                rows.append(row)
        return cls(rows, baseline)


def measure(image_id: str, test: ImageLike, reference: ImageLike, p: Optional[SsimParams] = None) -> MetricRow:
    p = p or SsimParams()
    return MetricRow(image_id, psnr(test, reference), ssim(test, reference, p), ms_ssim(test, reference, p))


def evaluate(pairs: Sequence[Tuple[str, ImageLike, ImageLike]], p: Optional[SsimParams] = None) -> MetricReport:
    """
    Метрики по парам (id, восстановленное, эталон)

    Returns:
        MetricReport, строки упорядочены по id
    """
    if not pairs:
        raise ParameterError("evaluate: пустой список пар")
    rows = sorted((measure(image_id, restored, sharp, p) for image_id, restored, sharp in pairs),
                  key=lambda row: row.id)
    report = MetricReport(rows)
    mean = report.mean
    logger.info(f"Средние метрики: PSNR {mean.psnr:.2f} дБ, SSIM {mean.ssim:.4f}, MS-SSIM {mean.ms_ssim:.4f}")
    return report
