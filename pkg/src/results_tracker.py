"""
Results Tracker - Sweep Output
Writes per-trial rows and per-p summaries as CSV
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd
from scipy import stats

from src.models import Outcome, TrialRecord

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['p', 'seed', 'outcome', 'step', 'ms']


class ResultsTracker:
    """
    Collect trial rows for one sweep and write them out.

    The trial CSV has exactly the columns p,seed,outcome,step,ms, sorted by
    (p, trial). The summary lands next to it as <out>.summary.csv.
    """

    def __init__(self, out_path: str, confidence: float = 0.95):
        self.out_path = Path(out_path)
        self.confidence = confidence

    @staticmethod
    def to_frame(records: Sequence[TrialRecord]) -> pd.DataFrame:
        ordered = sorted(records, key=lambda r: (r.p, r.trial))
        return pd.DataFrame([r.row() for r in ordered], columns=CSV_COLUMNS)

    def summarize(self, records: Sequence[TrialRecord]) -> pd.DataFrame:
        """
        Per-p success fraction with a normal-approximation interval and the
        fraction of every outcome class (each row sums to 1).

        Args:
            records: All trial rows of the sweep

        Returns:
            One row per grid value, ascending p
        """
        z = stats.norm.ppf((1 + self.confidence) / 2)
        frame = self.to_frame(records)
        rows = []
        for p, group in frame.groupby('p', sort=True):
            trials = len(group)
            wins = int((group['outcome'] == Outcome.SUCCESS.value).sum())
            fraction = wins / trials
            margin = z * (fraction * (1 - fraction) / trials) ** 0.5
            row = {
                'p': p,
                'trials': trials,
                'successes': wins,
                'success_fraction': round(fraction, 6),
                'ci_low': round(max(0.0, fraction - margin), 6),
                'ci_high': round(min(1.0, fraction + margin), 6),
            }
            for outcome in Outcome:
                row[outcome.value] = round(float((group['outcome'] == outcome.value).mean()), 6)
            rows.append(row)
        return pd.DataFrame(rows)

    @staticmethod
    def count_inversions(summary: pd.DataFrame) -> int:
        """Adjacent grid points where the success fraction drops."""
        values = summary['success_fraction'].tolist()
        return sum(1 for a, b in zip(values, values[1:]) if b < a)

    def summary_path(self) -> Path:
        return self.out_path.with_name(self.out_path.name + '.summary.csv')

    def write(self, records: Sequence[TrialRecord], header: Optional[Dict[str, str]] = None) -> pd.DataFrame:
        """
        Write the trial CSV and the summary CSV.

        Args:
            records: Trial rows in any order
            header: Extra "# key: value" comment lines for the summary file

        Returns:
            The summary frame
        """
        self.out_path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame(records).to_csv(self.out_path, index=False, lineterminator='\n')

        summary = self.summarize(records)
        inversions = self.count_inversions(summary)
        if inversions > 1:
            logger.warning(f"success curve has {inversions} inversions across the grid")

        with open(self.summary_path(), 'w', encoding='utf-8', newline='\n') as handle:
            for key, value in (header or {}).items():
                handle.write(f"# {key}: {value}\n")
            handle.write(f"# inversions: {inversions}\n")
            summary.to_csv(handle, index=False, lineterminator='\n')

        logger.info(f"wrote {len(records)} trials to {self.out_path}")
        return summary


def read_trials(path: str) -> pd.DataFrame:
    """Load a trial CSV back into a frame."""
    return pd.read_csv(path)
