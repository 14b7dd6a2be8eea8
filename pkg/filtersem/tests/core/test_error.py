import unittest

from filtersem.core.configuration.error import AttributesError
from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.error import error_to_string
from filtersem.core.exceptions import (
    ConfigurationError,
    DataError,
)


class TestErrorToString(unittest.TestCase):
    def test_cause_chain(self) -> None:
        try:
            try:
                raise DataError("Corpus image missing")
            except DataError as e:
                raise ConfigurationError("Unable to prepare the run") from e
        except ConfigurationError as e:
            text = error_to_string(e)
        lines = text.splitlines()
        self.assertTrue(lines[0].startswith("ConfigurationError: Unable to prepare the run ("))
        self.assertTrue(lines[1].startswith("  DataError: Corpus image missing ("))
        self.assertIn("test_error.py:", lines[0])

    def test_nested_attributes(self) -> None:
        configuration = RootConfiguration(
            ga=dict(
                population=0,
                colour="blue",
            ),
        )
        try:
            configuration.validate()
        except AttributesError as e:
            text = error_to_string(e)
        else:
            self.fail("validation should fail")
        self.assertIn("  - ga: Validation failed", text)
        self.assertIn("    - population: ", text)
        self.assertIn("    - colour: Unsupported attribute", text)

    def test_error_without_traceback(self) -> None:
        text = error_to_string(DataError("No results"))
        self.assertEqual("DataError: No results (?:?)\n", text)
