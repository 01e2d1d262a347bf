import json
import logging
from collections import defaultdict

logger = logging.getLogger(__name__)


class Tally:
    """Named event counters for sampler instrumentation."""

    def __init__(self, goals=None):
        self.counts = defaultdict(int)
        # Minimum counts a run is expected to reach, name -> count
        self.goals = dict(goals or {})

    def hit(self, name, k=1):
        self.counts[name] += k

    def __getitem__(self, name):
        return self.counts.get(name, 0)

    def merge(self, other):
        """Add the counters of another tally (or a plain counts dict) into this one."""
        counts = other.counts if isinstance(other, Tally) else other
        for name, count in counts.items():
            self.counts[name] += count
        return self

    def as_dict(self):
        return dict(sorted(self.counts.items()))

    def covered(self):
        """Return (met, total) over the configured goals."""
        met = sum(1 for name, goal in self.goals.items() if self.counts.get(name, 0) >= goal)
        return met, len(self.goals)

    def report(self, title="Sampler Tally"):
        """Log every counter and the goal summary."""
        logger.info(title)
        logger.info("=" * len(title))
        for name, count in sorted(self.counts.items()):
            if name in self.goals:
                logger.info(f"  {name}: {count} (goal: {self.goals[name]})")
            else:
                logger.info(f"  {name}: {count}")
        met, total = self.covered()
        if total:
            percentage = met / total * 100
            logger.info(f"Goals met: {percentage:.2f}% ({met}/{total})")

    def save(self, path):
        """Write counters and goals to a JSON file."""
        met, total = self.covered()
        data = {
            "counts": self.as_dict(),
            "goals": self.goals,
            "goals_met": met,
            "goals_total": total,
        }
        with open(path, "w") as f:
            json.dump(data, f, indent=4)


def hit(tally, name, k=1):
    """Count on an optional tally."""
    if tally is not None:
        tally.counts[name] += k
