import unittest
from typing import (
    Any,
    List,
    Optional,
)

from filtersem.core.configuration.attribute import (
    Attribute,
    AttributesContainer,
    AttributesContainerDict,
    AttributesContainerList,
    ExportableList,
)
from filtersem.core.configuration.error import (
    AttributesError,
    InvalidAttributeError,
    MissingAttributeError,
    UnsupportedAttributeError,
)
from filtersem.core.configuration.validator import (
    ValidatorError,
    choice_validator,
    positive_validator,
    probability_validator,
)


class Search(AttributesContainer):
    population = Attribute.create(
        value_type=int,
        default=20,
        validator=positive_validator,
    )
    mutation_p = Attribute.create(
        value_type=float,
        short_description="Mutation probability",
        validator=probability_validator,
    )
    crossover = Attribute.create(
        value_type=str,
        validator=choice_validator(("single_point", "uniform")),
    )
    layers = Attribute.create(
        value_type=ExportableList,
    )


class Run(AttributesContainer):
    name = Attribute.create(
        value_type=str,
        required=True,
    )
    search = Attribute.create(
        value_type=Search,
    )


class Part(AttributesContainer):
    size = Attribute.create(
        value_type=float,
        default=0.25,
    )


class Parts(AttributesContainerDict[Part]):
    def __init__(
        self,
        **kwargs: Any,
    ) -> None:
        super().__init__(
            values_type=Part,
            items=kwargs,
        )


class PartList(AttributesContainerList[Part]):
    def __init__(
        self,
        items: Optional[List[Any]] = None,
    ) -> None:
        super().__init__(
            values_type=Part,
            items=items,
        )


class TestAttribute(unittest.TestCase):
    def test_wrong_type(self) -> None:
        with self.assertRaises(InvalidAttributeError):
            Search.get_attributes()["crossover"].validate(value=3)

    def test_bool_is_not_a_number(self) -> None:
        with self.assertRaises(InvalidAttributeError):
            Search.get_attributes()["population"].validate(value=True)

    def test_required_without_default(self) -> None:
        with self.assertRaises(MissingAttributeError):
            Run.get_attributes()["name"].validate(value=None)

    def test_missing_optional_value_uses_default(self) -> None:
        Search.get_attributes()["population"].validate(value=None)
        Search.get_attributes()["mutation_p"].validate(value=None)

    def test_validator_failure(self) -> None:
        def no_vowels(value: str) -> None:
            raise ValidatorError("Vowels are not allowed")

        attribute = Attribute.create(
            value_type=str,
            validator=no_vowels,
        )
        with self.assertRaises(InvalidAttributeError) as context:
            attribute.validate(value="uniform")
        self.assertIn("Vowels are not allowed", str(context.exception))

    def test_message_names_the_attribute(self) -> None:
        with self.assertRaises(InvalidAttributeError) as context:
            Search.get_attributes()["mutation_p"].validate(value=1.5)
        self.assertIn("Mutation probability ; 'mutation_p' = 1.5", str(context.exception))

    def test_invalid_default(self) -> None:
        with self.assertRaises(InvalidAttributeError):
            Attribute.create(
                value_type=float,
                default=1.5,
                validator=probability_validator,
            )

    def test_default_of_wrong_type(self) -> None:
        with self.assertRaises(InvalidAttributeError):
            Attribute.create(
                value_type=int,
                default="ten",
            )


class TestAttributesContainer(unittest.TestCase):
    def test_default(self) -> None:
        search = Search()
        self.assertEqual(20, search.population)
        search.population = 8
        self.assertEqual(8, search.population)
        search.population = None
        self.assertEqual(20, search.population)

    def test_int_coerced_to_float(self) -> None:
        search = Search(
            mutation_p=1,
        )
        self.assertIsInstance(search.mutation_p, float)
        search.validate()

    def test_list_converted(self) -> None:
        search = Search(
            layers=["conv1", "conv2"],
        )
        self.assertIsInstance(search.layers, ExportableList)
        self.assertEqual(["conv1", "conv2"], search.export()["layers"])

    def test_list_not_turned_into_string(self) -> None:
        search = Search(
            crossover=["uniform"],
        )
        self.assertEqual(["uniform"], search.crossover)
        with self.assertRaises(AttributesError):
            search.validate()

    def test_dict_converted_to_section(self) -> None:
        run = Run(
            name="toy",
            search=dict(
                population=9,
            ),
        )
        self.assertIsInstance(run.search, Search)
        self.assertEqual(9, run.search.population)
        run.validate()

    def test_validate_collects_every_error(self) -> None:
        run = Run(
            search=dict(
                population=0,
                crossover="two_point",
                colour="blue",
            ),
        )
        with self.assertRaises(AttributesError) as context:
            run.validate()
        errors = context.exception.errors
        self.assertEqual({"name", "search"}, set(errors))
        self.assertIsInstance(errors["name"], MissingAttributeError)
        search_errors = errors["search"]
        assert isinstance(search_errors, AttributesError)
        self.assertEqual({"population", "crossover", "colour"}, set(search_errors.errors))
        self.assertIsInstance(search_errors.errors["colour"], UnsupportedAttributeError)

    def test_wrong_type_set_later(self) -> None:
        search = Search()
        search.crossover = 2
        with self.assertRaises(AttributesError):
            search.validate()

    def test_export_set_values_only(self) -> None:
        run = Run(
            name="toy",
            search=Search(
                mutation_p=0.25,
                crossover="uniform",
            ),
        )
        self.assertEqual(
            dict(
                name="toy",
                search=dict(
                    mutation_p=0.25,
                    crossover="uniform",
                ),
            ),
            run.export(),
        )

    def test_export_keeps_unsupported_keys(self) -> None:
        search = Search(
            colour="blue",
        )
        self.assertEqual(
            dict(
                colour="blue",
            ),
            search.export(),
        )

    def test_export_effective(self) -> None:
        search = Search(
            mutation_p=0.5,
        )
        self.assertEqual(
            dict(
                population=20,
                mutation_p=0.5,
                crossover=None,
                layers=None,
            ),
            search.export_effective(),
        )


class TestAttributesContainerList(unittest.TestCase):
    def test_mappings_converted(self) -> None:
        parts = PartList(
            [
                dict(
                    size=0.5,
                ),
                Part(),
                None,
            ]
        )
        self.assertEqual(2, len(parts))
        self.assertIsInstance(parts[0], Part)
        parts.validate()

    def test_validate_invalid_item(self) -> None:
        part = Part()
        part.size = "large"
        parts = PartList([part])
        with self.assertRaises(AttributesError) as context:
            parts.validate()
        self.assertIn("0", context.exception.errors)

    def test_validate_item_of_wrong_type(self) -> None:
        parts = PartList()
        parts.append("eye")  # type: ignore
        with self.assertRaises(AttributesError) as context:
            parts.validate()
        self.assertIsInstance(context.exception.errors["0"], InvalidAttributeError)

    def test_export(self) -> None:
        parts = PartList(
            [
                dict(
                    size=0.5,
                ),
                Part(),
            ]
        )
        self.assertEqual(
            [
                dict(
                    size=0.5,
                ),
                dict(),
            ],
            parts.export(),
        )


class TestAttributesContainerDict(unittest.TestCase):
    def test_mappings_converted(self) -> None:
        parts = Parts(
            eye=dict(
                size=0.1,
            ),
            nose=Part(),
        )
        self.assertIsInstance(parts["eye"], Part)
        self.assertEqual(0.1, parts["eye"].size)
        parts.validate()

    def test_item_not_a_mapping(self) -> None:
        with self.assertRaises(AttributesError) as context:
            Parts(
                eye=0.1,
            )
        self.assertIsInstance(context.exception.errors["eye"], InvalidAttributeError)

    def test_validate_invalid_item(self) -> None:
        parts = Parts()
        parts["eye"] = Part(
            size="small",
        )
        with self.assertRaises(AttributesError) as context:
            parts.validate()
        self.assertIn("eye", context.exception.errors)

    def test_export(self) -> None:
        parts = Parts(
            eye=dict(
                size=0.1,
            ),
            nose=dict(),
        )
        self.assertEqual(
            dict(
                eye=dict(
                    size=0.1,
                ),
                nose=dict(),
            ),
            parts.export(),
        )
