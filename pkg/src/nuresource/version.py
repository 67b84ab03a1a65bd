"""Version information for nuresource.

The version string is recorded in every run manifest, so results can be
traced to the code that produced them.
"""

__version__ = "0.1.0"
