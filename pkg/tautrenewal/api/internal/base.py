"""
Base internal classes, useful to simplify report and document handling.
"""

import json
from typing import Any, Dict, Optional

from ..error import ArgumentErrorCodes, InvalidArgumentError

JsonObject = Dict[str, Any]


class JsonObjectForm:
    # Outgoing JSON document, for example a metadata sidecar.
    def __init__(self, data: Optional[JsonObject] = None):
        self._data = data or {}

    def __str__(self):
        return json.dumps(self._data, indent=2, sort_keys=True)

    def json(self) -> JsonObject:
        return self._data


class JsonObjectView:
    # Typed read access to a JSON-like dict.
    # Reports produced by the toolkit are views over plain dicts,
    # so that they serialize to JSON with no extra code.
    def __init__(self, data: Optional[JsonObject] = None):
        self._data = data or {}

    def __str__(self):
        return json.dumps(self._data, indent=2, sort_keys=True)

    def __eq__(self, other):
        if not isinstance(other, JsonObjectView):
            return NotImplemented
        return type(self) is type(other) and self._data == other._data

    def json(self) -> JsonObject:
        """JSON-ready copy of the underlying document."""
        return dict(self._data)

    def _get(self, key):
        try:
            return self._data[key]
        except KeyError as exp:
            msg = f"{self.__class__.__name__} does not have field: {exp}"
            raise InvalidArgumentError(ArgumentErrorCodes.MissingField, msg) from None

    def _get_optional(self, key):
        return self._data.get(key, None)

