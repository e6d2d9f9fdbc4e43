"""Tests for the golden-file store."""

import json

from k33_enum.cache import GoldenStore


class TestGoldenStore:
    """Tests for GoldenStore."""

    def test_key_ignores_order(self):
        """The canonical key does not depend on dict order."""
        a = GoldenStore.canonical_key("count", {"max_n": 5, "class": "k33"})
        b = GoldenStore.canonical_key("count", {"class": "k33", "max_n": 5})
        assert a == b

    def test_set_and_get(self, tmp_path):
        """Stored values come back unchanged."""
        store = GoldenStore(tmp_path)
        key = GoldenStore.canonical_key("count", {"max_n": 3})
        path = store.set(key, {"rows": [1, 1, 2, 8]})
        assert path.exists()
        assert store.get(key) == {"rows": [1, 1, 2, 8]}

    def test_missing(self, tmp_path):
        assert GoldenStore(tmp_path).get("nothing") is None

    def test_corrupt_entry(self, tmp_path):
        """An unreadable file counts as missing."""
        store = GoldenStore(tmp_path)
        path = store.set("k", 1)
        path.write_text("{not json", encoding="utf-8")
        assert store.get("k") is None

    def test_file_layout(self, tmp_path):
        """Entries record their key and a timestamp."""
        store = GoldenStore(tmp_path)
        data = json.loads(store.set("k", [1, 2]).read_text(encoding="utf-8"))
        assert data["key"] == "k"
        assert data["value"] == [1, 2]
        assert "timestamp" in data

    def test_compare(self, tmp_path):
        """Differences are reported by JSON path."""
        store = GoldenStore(tmp_path)
        store.set("k", {"rows": [{"n": 1, "count": 1}, {"n": 2, "count": 2}]})
        assert store.compare("k", {"rows": [{"n": 1, "count": 1}, {"n": 2, "count": 2}]}) == []
        diff = store.compare("k", {"rows": [{"n": 1, "count": 1}, {"n": 2, "count": 3}]})
        assert diff == ["$.rows[1].count: 2 != 3"]

    def test_compare_missing(self, tmp_path):
        assert GoldenStore(tmp_path).compare("k", 1) == ["no golden entry for k"]

    def test_clear(self, tmp_path):
        store = GoldenStore(tmp_path)
        store.set("a", 1)
        store.set("b", 2)
        assert store.clear() == 2
        assert store.get("a") is None
