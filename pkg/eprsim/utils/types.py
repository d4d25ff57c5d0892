"""Shared type aliases."""
from pathlib import Path
from typing import TypeVar

FilePathType = TypeVar("FilePathType", str, Path)
