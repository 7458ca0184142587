"""
Command-line front end for jcwitness.
"""

from .interface import cli, setup_logging

__all__ = ['cli', 'setup_logging']
