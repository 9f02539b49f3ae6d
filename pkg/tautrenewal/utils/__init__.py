from .converters import convert_law, convert_penalty, convert_penalties
