from .base import (
    JsonObject,
    JsonObjectForm,
    JsonObjectView,
)
from .csvio import format_float, read_rows, write_rows
from .parallel import fan_out
from .seeding import Stream, generator
