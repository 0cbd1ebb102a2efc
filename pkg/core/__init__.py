# Python package initialization files

__version__ = "0.1.0"
