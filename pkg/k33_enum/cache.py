"""File-based store of golden outputs keyed by run configuration."""

import hashlib
import json
from datetime import datetime
from pathlib import Path
from typing import Any

from .utils import ensure_directory, get_logger


class GoldenStore:
    """Directory of JSON golden files; entries never expire."""

    def __init__(self, golden_dir: Path | str = "golden"):
        """
        Initialize the golden store.

        Args:
            golden_dir: Directory holding the golden files
        """
        self.golden_dir = ensure_directory(golden_dir)
        self.logger = get_logger()

    @staticmethod
    def canonical_key(command: str, config: dict[str, Any]) -> str:
        """Stable text key for a command and its configuration."""
        return json.dumps({"command": command, **config}, sort_keys=True, default=str)

    def _get_golden_key(self, key: str) -> str:
        return hashlib.md5(key.encode()).hexdigest()

    def _get_golden_path(self, key: str) -> Path:
        return self.golden_dir / f"{self._get_golden_key(key)}.json"

    def get(self, key: str) -> Any | None:
        """
        Retrieve a golden value.

        Args:
            key: Canonical key

        Returns:
            Stored value, or None when missing or unreadable
        """
        golden_path = self._get_golden_path(key)

        if not golden_path.exists():
            return None

        try:
            with open(golden_path, "r", encoding="utf-8") as f:
                data = json.load(f)
            self.logger.debug(f"Golden hit for key: {key[:40]}...")
            return data["value"]
        except (json.JSONDecodeError, KeyError) as e:
            self.logger.warning(f"Invalid golden entry {golden_path.name}: {e}")
            return None

    def set(self, key: str, value: Any) -> Path:
        """
        Store a golden value (must be JSON-serializable).

        Returns:
            Path of the written file
        """
        golden_path = self._get_golden_path(key)
        data = {"timestamp": datetime.now().isoformat(), "key": key, "value": value}
        with open(golden_path, "w", encoding="utf-8") as f:
            json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
        self.logger.info(f"Wrote golden entry to {golden_path}")
        return golden_path

    def compare(self, key: str, value: Any) -> list[str]:
        """
        Compare a fresh value with the stored one.

        Returns:
            Differences as 'path: golden != fresh' lines; empty when equal
        """
        golden = self.get(key)
        if golden is None:
            return [f"no golden entry for {key}"]
        differences: list[str] = []
        _diff("$", golden, json.loads(json.dumps(value)), differences)
        if differences:
            self.logger.warning(f"{len(differences)} differences from golden entry")
        return differences

    def clear(self) -> int:
        """
        Remove all golden entries.

        Returns:
            Number of entries removed
        """
        count = 0
        for golden_file in self.golden_dir.glob("*.json"):
            golden_file.unlink()
            count += 1
        self.logger.info(f"Cleared {count} golden entries")
        return count


def _diff(path: str, golden: Any, fresh: Any, out: list[str]) -> None:
    if isinstance(golden, dict) and isinstance(fresh, dict):
        for name in sorted(set(golden) | set(fresh)):
            _diff(f"{path}.{name}", golden.get(name), fresh.get(name), out)
    elif isinstance(golden, list) and isinstance(fresh, list) and len(golden) == len(fresh):
        for i, (a, b) in enumerate(zip(golden, fresh)):
            _diff(f"{path}[{i}]", a, b, out)
    elif golden != fresh:
        out.append(f"{path}: {golden!r} != {fresh!r}")
