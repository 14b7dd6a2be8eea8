import json
import tempfile
import unittest
from pathlib import Path
from typing import (
    List,
    Tuple,
)

from filtersem.cli.main import run as cli_run
from filtersem.tests.resource import resource
from filtersem.tests.std_redirect import StdRedirect
from filtersem.version import __VERSION__


class TestCli(unittest.TestCase):
    def _run(
        self,
        *args: str,
    ) -> Tuple[int, str, str]:
        with self.assertRaises(SystemExit) as se, StdRedirect.redirect() as outputs:
            cli_run(
                *args,
            )
        code = se.exception.code
        return int(code) if code is not None else 0, outputs.get_stdout(), outputs.get_stderr()

    def _test_version(
        self,
        flag: str,
    ) -> None:
        code, stdout, stderr = self._run(flag)
        self.assertEqual(0, code)
        self.assertIn(__VERSION__, stdout)
        self.assertEqual("", stderr)

    def test_version_long(self) -> None:
        self._test_version(
            flag="--version",
        )

    def test_version_short(self) -> None:
        self._test_version(
            flag="-V",
        )

    def test_file_not_found(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/does-not-exist.yml")}',
        )
        self.assertEqual(2, code)
        self.assertEqual("", stdout)
        self.assertIn("Configuration file not found", stderr)

    def test_invalid_format(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/valid.json")}',
            "--config-format=foo",
        )
        self.assertEqual(2, code)
        self.assertEqual("", stdout)
        self.assertNotEqual("", stderr)

    def test_valid_json(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/valid.json")}',
            "--config-format=json",
        )
        self.assertEqual(0, code)
        self.assertIn("is valid", stdout)
        self.assertEqual("", stderr)

    def test_format_guessed_from_extension(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/valid.json")}',
        )
        self.assertEqual(0, code)
        self.assertIn("is valid", stdout)
        self.assertEqual("", stderr)

    def test_dump_effective_configuration(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/valid.json")}',
            "--dump",
            "--set",
            "ga.mutation_p=0.1",
        )
        self.assertEqual(0, code, stderr)
        effective = json.loads(stdout)
        self.assertEqual(10, effective["ga"]["population"])
        self.assertEqual(0.1, effective["ga"]["mutation_p"])
        self.assertEqual("single_point", effective["ga"]["crossover"])
        self.assertEqual("eye", effective["corpus"]["merges"]["right_eye"])

    def test_valid_yaml(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/valid.yml")}',
        )
        self.assertEqual(0, code)
        self.assertIn("is valid", stdout)
        self.assertEqual("", stderr)

    def test_invalid_json(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/invalid.json")}',
            "--config-format=json",
        )
        self.assertEqual(2, code)
        self.assertEqual("", stdout)
        self.assertIn("Invalid configuration", stderr)

    def test_invalid_yaml(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/invalid.yml")}',
            "--config-format=yaml",
        )
        self.assertEqual(2, code)
        self.assertEqual("", stdout)
        self.assertIn("Invalid configuration", stderr)

    def test_invalid_override(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/valid.yml")}',
            "--set",
            "ga.mutation_p=1.5",
        )
        self.assertEqual(2, code)
        self.assertEqual("", stdout)
        self.assertIn("Invalid configuration", stderr)

    def test_unknown_override(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/valid.yml")}',
            "--set",
            "ga.colour=blue",
        )
        self.assertEqual(2, code)
        self.assertNotEqual("", stderr)

    def test_format_mismatch(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/invalid.yml")}',
            "--config-format=json",
        )
        self.assertEqual(2, code)
        self.assertEqual("", stdout)
        self.assertNotEqual("", stderr)

    def test_not_root(self) -> None:
        code, stdout, stderr = self._run(
            "validate",
            f'--config-file={resource("configurations/not-root.json")}',
            "--config-format=json",
        )
        self.assertEqual(2, code)
        self.assertEqual("", stdout)
        self.assertNotEqual("", stderr)

    def test_schema_text(self) -> None:
        code, stdout, stderr = self._run(
            "schema",
        )
        self.assertEqual(0, code)
        self.assertIn("ga.population", stdout)
        self.assertIn("corpus.merges", stdout)
        self.assertEqual("", stderr)

    def test_schema_json(self) -> None:
        code, stdout, stderr = self._run(
            "schema",
            "--format=json",
        )
        self.assertEqual(0, code)
        schema = json.loads(stdout)
        self.assertEqual("Run configuration", schema["title"])
        self.assertIn("ga", schema["properties"])

    def test_report_without_results(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            code, stdout, stderr = self._run(
                "report",
                f'--config-file={resource("configurations/valid.yml")}',
                "-o",
                str(Path(directory) / "nothing"),
            )
        self.assertEqual(3, code)
        self.assertEqual("", stdout)
        self.assertNotEqual("", stderr)

    def test_generate_analyze_report(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            root = Path(directory)
            overrides = self._overrides(root)
            code, stdout, stderr = self._run(
                "gen-synth",
                "--baseline",
                *overrides,
            )
            self.assertEqual(0, code, stderr)
            self.assertIn("Matched-filter baseline", stdout)
            self.assertTrue((root / "corpus" / "manifest.json").is_file())

            code, stdout, stderr = self._run(
                "pipeline",
                *overrides,
            )
            self.assertEqual(0, code, stderr)
            self.assertIn("Pipeline done.", stdout)
            self.assertTrue((root / "out" / "summary.csv").is_file())
            self.assertTrue((root / "out" / "manifest.json").is_file())

            code, stdout, stderr = self._run(
                "report",
                *overrides,
            )
            self.assertEqual(0, code, stderr)
            self.assertIn("# Part detectors", stdout)
            self.assertTrue((root / "out" / "report.md").is_file())

            code, stdout, stderr = self._run(
                "export-topk",
                "-k",
                "2",
                *overrides,
            )
            self.assertEqual(0, code, stderr)
            self.assertIn("Export done", stdout)
            self.assertTrue((root / "out" / "sheets" / "manifest.json").is_file())

            code, stdout, stderr = self._run(
                "discrim",
                *overrides,
            )
            self.assertEqual(0, code, stderr)
            self.assertIn("Discrim done.", stdout)
            self.assertTrue((root / "out" / "discrim" / "filters.csv").is_file())

    def _overrides(
        self,
        root: Path,
    ) -> List[str]:
        return [
            f'--config-file={resource("configurations/valid.yml")}',
            "--seed=7",
            "--workers=1",
            "-o",
            str(root / "out"),
            "--set",
            f"corpus.path={root / 'corpus'}",
            "--set",
            f"network.spec={resource('networks/toy.json')}",
            "--set",
            "ga.population=6",
            "--set",
            "ga.generations=2",
        ]
