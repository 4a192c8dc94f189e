"""Run artifacts: trajectory CSV, event log, snapshots and metrics"""

import json
from pathlib import Path
from typing import List, Sequence

from loguru import logger

from ..models.errors import ConfigError
from ..models.events import RectRecord, UpdateEvent
from ..models.metrics import RunMetrics
from ..utils.integrator import Trajectory

TRAJECTORY_FILE = "trajectory.csv"
EVENTS_FILE = "events.log"
METRICS_FILE = "metrics.txt"


class ArtifactService:
    """Writes and reads the files of one run directory"""

    def __init__(self, run_folder: Path):
        """Initialize artifact service

        Args:
            run_folder: Directory holding the run's output files
        """
        self.run_folder = Path(run_folder)

    def dump_trajectory(self, trajectory: Trajectory, every: int = 1) -> Path:
        """Write the trajectory CSV keeping every ``every``-th record

        Args:
            trajectory: Recorded run
            every: Decimation factor

        Returns:
            Path to the CSV file
        """
        if len(trajectory) == 0:
            raise ValueError("No trajectory records to dump")
        filepath = self.run_folder / TRAJECTORY_FILE
        try:
            trajectory.decimated(every).to_csv(filepath)
            logger.info(
                f"Dumped {len(trajectory)} records (every {every}) "
                f"to {filepath}"
            )
            return filepath
        except Exception as e:
            logger.error(f"Failed to dump trajectory: {e}")
            raise

    def dump_events(self, events: Sequence[UpdateEvent]) -> Path:
        """One JSON object per line, in update-instant order"""
        self.run_folder.mkdir(parents=True, exist_ok=True)
        filepath = self.run_folder / EVENTS_FILE
        try:
            with open(filepath, "w", encoding="utf-8") as f:
                for event in events:
                    f.write(event.model_dump_json() + "\n")
            logger.info(f"Dumped {len(events)} update events to {filepath}")
            return filepath
        except Exception as e:
            logger.error(f"Failed to dump events: {e}")
            raise

    def dump_snapshot(self, k: int, records: Sequence[RectRecord]) -> Path:
        """Partition after iteration ``k``, one rect per line"""
        self.run_folder.mkdir(parents=True, exist_ok=True)
        filepath = self.run_folder / f"partition_{k}.snapshot"
        with open(filepath, "w", encoding="utf-8") as f:
            for record in records:
                f.write(record.model_dump_json() + "\n")
        logger.debug(f"Dumped {len(records)} rects to {filepath}")
        return filepath

    def dump_metrics(self, metrics: RunMetrics) -> Path:
        self.run_folder.mkdir(parents=True, exist_ok=True)
        filepath = self.run_folder / METRICS_FILE
        with open(filepath, "w", encoding="utf-8") as f:
            f.write("\n".join(metrics.to_lines()) + "\n")
        logger.info(f"Dumped metrics to {filepath}")
        return filepath

    def load_trajectory(self) -> Trajectory:
        filepath = self.run_folder / TRAJECTORY_FILE
        if not filepath.exists():
            raise ConfigError(f"No trajectory file in {self.run_folder}")
        return Trajectory.from_csv(filepath)

    def load_events(self) -> List[UpdateEvent]:
        """Parse events.log; unparseable lines are skipped with a warning"""
        filepath = self.run_folder / EVENTS_FILE
        if not filepath.exists():
            raise ConfigError(f"No event log in {self.run_folder}")
        events = []
        with open(filepath, "r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    events.append(UpdateEvent(**json.loads(line)))
                except Exception as e:
                    logger.warning(f"Skipping event line {number}: {e}")
        return events

    def load_metrics(self) -> dict:
        """metrics.txt as a key -> string value mapping"""
        filepath = self.run_folder / METRICS_FILE
        with open(filepath, "r", encoding="utf-8") as f:
            pairs = (line.strip().split("=", 1) for line in f if "=" in line)
            return {key: value for key, value in pairs}
