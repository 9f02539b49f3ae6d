__version__ = "1.0.0"
__title__ = "taut-renewal"
__description__ = "Taut strings of Brownian paths and their renewal structure"
__license__ = "Apache License 2.0"
__author__ = "taut-renewal developers"
__author_email__ = ""
