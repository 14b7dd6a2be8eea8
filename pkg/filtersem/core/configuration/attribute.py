"""Typed configuration keys and the containers holding them."""
from __future__ import annotations

from collections import OrderedDict
from typing import (
    Any,
    Dict,
    Generic,
    Iterable,
    List,
    Mapping,
    Optional,
)
from typing import OrderedDict as OrderedDictType
from typing import (
    Text,
    Tuple,
    Type,
    TypeVar,
    Union,
    cast,
)

from filtersem.core.configuration.error import (
    AttributesError,
    BaseAttributeError,
    InvalidAttributeError,
    MissingAttributeError,
    UnsupportedAttributeError,
)
from filtersem.core.configuration.exportable import Exportable
from filtersem.core.configuration.validatable import Validatable
from filtersem.core.configuration.validator import (
    ValidatorError,
    ValidatorProtocol,
)


T = TypeVar("T", covariant=True)
V = TypeVar("V", covariant=True)


def _is_instance(
    value: Any,
    value_type: Type[Any],
) -> bool:
    # bool is an int subclass but never a valid number here
    if isinstance(value, bool) and value_type in (int, float):
        return False
    return isinstance(value, value_type)


def _coerce_number(
    value_type: Type[Any],
    value: Any,
) -> Any:
    if value_type is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def _raise_collected(
    checks: Iterable[Tuple[str, Validatable]],
    context: Any,
) -> None:
    errors: Dict[str, BaseAttributeError] = {}
    for key, item in checks:
        try:
            item.validate()
        except BaseAttributeError as e:
            errors[key] = e
    if errors:
        raise AttributesError(
            message="Validation failed",
            errors=errors,
            context=context,
        )


class Attribute(Generic[T]):
    """
    A typed key of a configuration section.

    Examples:
        class GASection(AttributesContainer):
            mutation_p = Attribute.create(value_type=float, default=0.3, validator=probability_validator)

        section = GASection(mutation_p=1)
        section.mutation_p  # 1.0
    """

    _name: Optional[str] = None
    value_type: Type[T]
    required: bool
    default: Optional[T]
    short_description: Optional[Text] = None
    description: Optional[Text] = None
    validator: Optional[ValidatorProtocol[T]] = None

    def __init__(
        self,
        value_type: Type[T],
        short_description: Optional[Text] = None,
        description: Optional[Text] = None,
        default: Optional[T] = None,
        required: bool = False,
        validator: Optional[ValidatorProtocol[T]] = None,
    ) -> None:
        """
        Initialize the attribute.

        Args:
            value_type: the type of the values
            short_description: a title, used in messages and schemas
            description: a longer description
            default: the value used when none is set
            required: whether a value (or a default) is mandatory
            validator: an extra check of the values

        Raises:
            InvalidAttributeError: if the default value is not acceptable
        """
        self.value_type = value_type
        self.short_description = short_description
        self.description = description
        self.required = required
        self.validator = validator
        self.default = _coerce_number(
            value_type=value_type,
            value=default,
        )
        if self.default is None:
            return
        if not _is_instance(self.default, value_type):
            raise InvalidAttributeError(
                message=f"Default {repr(self.default)} is not a {value_type.__name__}",
                context=self,
            )
        self._check_rules(
            value=self.default,
            what="default",
        )

    @classmethod
    def create(
        cls,
        value_type: Type[V],
        short_description: Optional[Text] = None,
        description: Optional[Text] = None,
        default: Optional[V] = None,
        required: bool = False,
        validator: Optional[ValidatorProtocol[V]] = None,
    ) -> Attribute[V]:
        """
        Create an attribute, to be declared in the body of an `AttributesContainer`.

        Args:
            value_type: the type of the values
            short_description: a title, used in messages and schemas
            description: a longer description
            default: the value used when none is set
            required: whether a value (or a default) is mandatory
            validator: an extra check of the values

        Returns:
            the attribute
        """
        return Attribute[V](
            value_type=value_type,
            short_description=short_description,
            description=description,
            default=default,
            required=required,
            validator=validator,
        )

    @property
    def name(self) -> str:
        """
        Get the key of the attribute in its container.

        Returns:
            the key
        """
        if self._name is not None:
            return self._name
        return f"Unnamed attribute #{hash(self):x}"

    def validate(
        self,
        value: Any,
    ) -> None:
        """
        Check a value, falling back on the default when it is None.

        Args:
            value: a value

        Raises:
            MissingAttributeError: if the attribute is required and has no value
            InvalidAttributeError: if the value has the wrong type or is rejected by the validator
        """
        if value is None:
            value = self.default
        if value is None:
            if self.required:
                raise MissingAttributeError(
                    message=f"Expecting value for required attribute {repr(self.name)} with no default",
                    context=self,
                )
            return
        if not _is_instance(value, self.value_type):
            raise InvalidAttributeError(
                message=(
                    f"Wrong value type for {self._label()} = {repr(value)}: "
                    + f"expecting {self.value_type} got {type(value)}"
                ),
                context=self,
            )
        if isinstance(value, Validatable):
            value.validate()
        self._check_rules(
            value=value,
            what=self._label(),
        )

    def convert(
        self,
        value: Any,
    ) -> Any:
        """
        Convert a raw (deserialized) value into the attribute type where possible.

        Mappings become containers, lists become typed lists and integers become floats for float attributes.
        Other values are kept as they are and rejected later by `validate`.

        Args:
            value: a raw value

        Returns:
            the converted value
        """
        if isinstance(value, self.value_type):
            return value
        if isinstance(value, Mapping) and issubclass(self.value_type, (AttributesContainer, Mapping)):
            return self.value_type(**value)
        if isinstance(value, list) and issubclass(self.value_type, list):
            return self.value_type(value)  # type: ignore
        return _coerce_number(
            value_type=self.value_type,
            value=value,
        )

    def _label(self) -> str:
        if self.short_description:
            return f"{self.short_description} ; {repr(self.name)}"
        return repr(self.name)

    def _check_rules(
        self,
        value: Any,
        what: str,
    ) -> None:
        if not self.validator:
            return
        try:
            self.validator(
                value=value,
            )
        except ValidatorError as e:
            raise InvalidAttributeError(
                message=f"Validation error for {what} = {repr(value)}: {e}",
                context=self,
            )

    def __set_name__(
        self,
        owner: Type[AttributesContainer],
        name: str,
    ) -> None:
        self._name = name

    def __set__(
        self,
        instance: AttributesContainer,
        value: Any,
    ) -> None:
        instance._values[self.name] = self.convert(value)

    def __get__(
        self,
        instance: Optional[AttributesContainer],
        owner: Type[AttributesContainer],
    ) -> Optional[T]:
        if instance is None:
            return self  # type: ignore
        value = instance._values.get(self.name)
        return cast(Optional[T], value if value is not None else self.default)

    def __repr__(self) -> str:
        """
        Get the representation of the attribute.

        Returns:
            the representation
        """
        default = f", default={repr(self.default)}" if self.default is not None else ""
        return f"Attribute({repr(self.name)}, {self.value_type.__name__}{default})"


class _AttributeValue(Validatable):
    def __init__(
        self,
        attribute: Attribute[Any],
        value: Any,
    ) -> None:
        self.attribute = attribute
        self.value = value

    def validate(self) -> None:
        self.attribute.validate(
            value=self.value,
        )


class _Rejected(Validatable):
    def __init__(
        self,
        error: BaseAttributeError,
    ) -> None:
        self.error = error

    def validate(self) -> None:
        raise self.error


class AttributesContainer(
    Validatable,
    Exportable[Dict[str, Any]],
):
    """A configuration section: the values of the attributes declared in its class body."""

    _values: Dict[str, Any]
    _extra: Dict[str, Any]

    def __init__(
        self,
        **kwargs: Any,
    ) -> None:
        """
        Initialize the section.

        Unknown keys are kept and reported by `validate`.

        Args:
            kwargs: the values, by key
        """
        attributes = self.get_attributes()
        self._values = {name: None for name in attributes}
        self._extra = {}
        for key, value in kwargs.items():
            if key in attributes:
                setattr(self, key, value)
            else:
                self._extra[key] = value

    @classmethod
    def get_attributes(cls) -> Dict[str, Attribute[Any]]:
        """
        Get the declared attributes, inherited ones first.

        Returns:
            the attributes by key
        """
        attributes: Dict[str, Attribute[Any]] = OrderedDict()
        for klass in reversed(cls.__mro__):
            for name, value in vars(klass).items():
                if isinstance(value, Attribute):
                    attributes[name] = value
        return attributes

    def validate(self) -> None:
        """
        Validate every value, reporting all the errors at once.

        Raises:
            AttributesError: if a value is missing or invalid, or a key is unsupported
        """
        checks: List[Tuple[str, Validatable]] = [
            (name, _AttributeValue(attribute, self._values[name])) for name, attribute in self.get_attributes().items()
        ]
        checks.extend(
            (
                key,
                _Rejected(
                    UnsupportedAttributeError(
                        message="Unsupported attribute",
                        context=self,
                    )
                ),
            )
            for key in self._extra
        )
        _raise_collected(
            checks=checks,
            context=self,
        )

    def export(self) -> Dict[str, Any]:
        """
        Export the values that were set, unknown keys included.

        Returns:
            the values by key
        """
        exported: Dict[str, Any] = {}
        for name, value in self._values.items():
            if isinstance(value, Exportable):
                value = value.export()
            if value is not None:
                exported[name] = value
        exported.update(self._extra)
        return exported

    def export_effective(self) -> Dict[str, Any]:
        """
        Export every value as used by a run, defaults filled in.

        Returns:
            the values by key
        """
        exported: Dict[str, Any] = {}
        for name in self._values:
            value = getattr(self, name)
            if isinstance(value, AttributesContainer):
                value = value.export_effective()
            elif isinstance(value, Exportable):
                value = value.export()
            exported[name] = value
        return exported

    def __repr__(self) -> str:
        """
        Get the representation of the section.

        Returns:
            the representation
        """
        values = ", ".join(f"{name}={repr(getattr(self, name))}" for name in self._values)
        return f"{self.__class__.__name__}({values})"


T_AC = TypeVar("T_AC", bound=AttributesContainer)


class AttributesContainerList(
    List[T_AC],
    Validatable,
    Exportable[List[Any]],
):
    """A list of sections of a single type."""

    values_type: Type[T_AC]

    def __init__(
        self,
        values_type: Type[T_AC],
        items: Optional[List[Any]],
    ):
        """
        Initialize the list; mappings are converted into sections.

        Args:
            values_type: the type of the sections
            items: the initial items
        """
        super().__init__(
            [
                values_type(**item) if isinstance(item, Mapping) else item
                for item in items or []
                if item is not None
            ]
        )
        self.values_type = values_type

    def validate(self) -> None:
        """
        Validate every item.

        Raises:
            AttributesError: if an item is invalid
        """
        checks: List[Tuple[str, Validatable]] = []
        for index, item in enumerate(self):
            if isinstance(item, self.values_type):
                checks.append((str(index), item))
                continue
            wrong_type = InvalidAttributeError(
                message=f"Expecting {self.values_type} for item {index} ; got {type(item)} ({repr(item)})",
                context=self,
            )
            checks.append((str(index), _Rejected(wrong_type)))
        _raise_collected(
            checks=checks,
            context=self,
        )

    def export(self) -> List[Any]:
        """
        Export the items.

        Returns:
            the exported items
        """
        return [item.export() if isinstance(item, Exportable) else item for item in self]


KT = TypeVar("KT")
VT = TypeVar("VT")
EKT = TypeVar("EKT")
EVT = TypeVar("EVT")


class ExportableDict(OrderedDictType[KT, VT], Exportable[Dict[EKT, EVT]]):
    """An ordered mapping of plain values."""

    def export(self) -> Dict[EKT, EVT]:
        """
        Export the mapping.

        Returns:
            a plain dict
        """
        return dict(self)  # type: ignore


class AttributesContainerDict(
    ExportableDict[str, T_AC, str, Any],
    Validatable,
):
    """Named sections of a single type."""

    values_type: Type[T_AC]

    def __init__(
        self,
        values_type: Type[T_AC],
        items: Mapping[str, Any],
    ) -> None:
        """
        Initialize the mapping; mapping values are converted into sections.

        Args:
            values_type: the type of the sections
            items: the initial items

        Raises:
            AttributesError: if an item is neither a section nor a mapping
        """
        self.values_type = values_type
        errors: Dict[str, BaseAttributeError] = {}
        sections: Dict[str, T_AC] = {}
        for key, item in items.items():
            if item is None:
                continue
            if isinstance(item, values_type):
                sections[key] = item
            elif isinstance(item, Mapping):
                try:
                    sections[key] = values_type(**item)
                except BaseAttributeError as e:
                    errors[key] = e
            else:
                errors[key] = InvalidAttributeError(
                    message=f"Expecting a mapping for {repr(key)} ; got {type(item)}",
                    context=self,
                )
        if errors:
            raise AttributesError(
                message="Invalid items",
                context=self,
                errors=errors,
            )
        super().__init__(sections)

    def validate(self) -> None:
        """
        Validate every section.

        Raises:
            AttributesError: if a section is invalid
        """
        _raise_collected(
            checks=self.items(),
            context=self,
        )

    def export(self) -> Dict[str, Any]:
        """
        Export the sections.

        Returns:
            the exported sections by name
        """
        return {key: section.export() for key, section in self.items()}


LT = TypeVar("LT")
ET = TypeVar("ET")


class ExportableList(List[LT], Exportable[List[ET]]):
    """A list of plain values."""

    def export(self) -> List[ET]:
        """
        Export the list.

        Returns:
            a copy of the list
        """
        return cast(List[ET], self.copy())


StrAttributeType = Union[Optional[str], Attribute[str]]
IntAttributeType = Union[Optional[int], Attribute[int]]
FloatAttributeType = Union[Optional[float], Attribute[float]]
BoolAttributeType = Union[Optional[bool], Attribute[bool]]
