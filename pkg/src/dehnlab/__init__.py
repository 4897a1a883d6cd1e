"""Dehn functions and van Kampen certificates for Grigorchuk-type presentations."""

__version__ = "0.1.0"
