# Python package initialization files
