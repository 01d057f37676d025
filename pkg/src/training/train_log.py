"""
Журнал обучения: записи по шагам и CSV-файл step,wel,l2,el,lr,seconds
"""
import csv
import logging
from dataclasses import astuple, dataclass
from pathlib import Path
from typing import List

from src.config import TRAIN_LOG_HEADER
from src.errors import TrainingError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainRecord:
    step: int
    wel: float
    l2: float
    el: float
    lr: float
    seconds: float


class TrainLog:
    def __init__(self, records: List[TrainRecord] = None):
        self.records: List[TrainRecord] = []
        for record in records or []:
            self.append(record)
        self._flushed = 0

    def append(self, record: TrainRecord):
        if self.records and record.step <= self.records[-1].step:
            raise TrainingError(f"Шаги журнала должны строго возрастать: {self.records[-1].step} -> {record.step}")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    @property
    def last_step(self) -> int:
        return self.records[-1].step if self.records else 0

    def wel_values(self) -> List[float]:
        return [record.wel for record in self.records]

    def truncate(self, step: int):
        """Отбрасывает записи после шага step (при возобновлении с чекпоинта)"""
        self.records = [record for record in self.records if record.step <= step]
        self._flushed = min(self._flushed, len(self.records))

    def write_csv(self, path: Path):
        """Полностью перезаписывает файл журнала"""
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(TRAIN_LOG_HEADER)
            for record in self.records:
                writer.writerow([repr(value) for value in astuple(record)])
        self._flushed = len(self.records)

    def flush(self, path: Path):
        """Дописывает в файл записи, ещё не сброшенные на диск"""
        path = Path(path)
        if not path.exists() or self._flushed == 0:
            self.write_csv(path)
            return
        with open(path, "a", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            for record in self.records[self._flushed:]:
                writer.writerow([repr(value) for value in astuple(record)])
        self._flushed = len(self.records)

    @classmethod
    def read_csv(cls, path: Path) -> "TrainLog":
        path = Path(path)
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames != TRAIN_LOG_HEADER:
                raise TrainingError(f"Неожиданный заголовок журнала {path}: {reader.fieldnames}")
            records = [TrainRecord(int(row["step"]), float(row["wel"]), float(row["l2"]),
                                   float(row["el"]), float(row["lr"]), float(row["seconds"]))
                       for row in reader]
        log = cls(records)
        log._flushed = len(log.records)
        logger.debug(f"Прочитан журнал {path}: {len(log)} записей")
        return log
