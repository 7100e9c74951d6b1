import json
import os
import tempfile
import unittest

from models import LabSettings, LogLevel
from state import StateManager


class TestSettings(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "settings.json")

    def tearDown(self):
        self.tmp.cleanup()

    def test_missing_file_is_created_with_defaults(self):
        settings = StateManager.load_settings(self.path)
        self.assertEqual(settings, LabSettings())
        with open(self.path, encoding='utf-8') as f:
            self.assertEqual(json.load(f)["log_level"], "INFO")

    def test_round_trip(self):
        settings = LabSettings(enumeration_cap=18, log_level=LogLevel.DEBUG, max_workers=3)
        StateManager.save_settings(settings, self.path)
        self.assertEqual(StateManager.load_settings(self.path), settings)

    def test_partial_file_keeps_defaults(self):
        with open(self.path, 'w', encoding='utf-8') as f:
            json.dump({"claim17_c": 4}, f)
        settings = StateManager.load_settings(self.path)
        self.assertEqual(settings.claim17_c, 4.0)
        self.assertEqual(settings.enumeration_cap, LabSettings().enumeration_cap)

    def test_corrupt_file_falls_back(self):
        with open(self.path, 'w', encoding='utf-8') as f:
            f.write("{not json")
        with self.assertLogs("state", level="ERROR"):
            self.assertEqual(StateManager.load_settings(self.path), LabSettings())


class TestReports(unittest.TestCase):
    def test_dump_is_deterministic(self):
        first = StateManager.dump_report({"b": 1, "a": [1, 2]})
        second = StateManager.dump_report({"a": [1, 2], "b": 1})
        self.assertEqual(first, second)
        self.assertTrue(first.endswith("}\n"))

    def test_save_report_creates_directories(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "nested", "report.json")
            StateManager.save_report({"kind": "check"}, path)
            with open(path, encoding='utf-8') as f:
                self.assertEqual(json.load(f), {"kind": "check"})


if __name__ == '__main__':
    unittest.main()
