"""Registry of review criteria referenced by ``CRIT.<kind><letter>`` codes.

Letters map ordinally onto each column (``a`` is the first entry). A registry
file is an INI document with ``[form]`` and/or ``[content]`` sections of
``letter = name`` pairs; a section present in the file replaces the default
column of that kind.
"""

from __future__ import annotations

import configparser
import os
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Union

from .model import CriterionKind

ENV_VAR = "DEMCODE_CRITERIA"

FORM_CRITERIA = (
    "Nomenclature",
    "Algorithms",
    "Documentation",
    "Functions",
    "Files",
    "Data Types",
    "Editor",
    "Variable declaration",
    "Global variables",
    "Document structure",
    "Semantics",
    "Level of description",
)

CONTENT_CRITERIA = (
    "Functionality",
    "Reusability",
    "Portability",
    "Reliability",
    "Maintainability",
    "Efficiency",
    "Ease of implementation",
)


def _ordinal(names: tuple[str, ...]) -> dict[str, str]:
    if len(names) > len(string.ascii_lowercase):
        raise ValueError("at most 26 criteria per kind")
    return dict(zip(string.ascii_lowercase, names))


@dataclass(frozen=True)
class CriterionRegistry:
    form: Mapping[str, str]
    content: Mapping[str, str]

    @classmethod
    def default(cls) -> "CriterionRegistry":
        return cls(_ordinal(FORM_CRITERIA), _ordinal(CONTENT_CRITERIA))

    def column(self, kind: CriterionKind) -> Mapping[str, str]:
        return self.form if kind is CriterionKind.FORM else self.content

    def has(self, kind: CriterionKind, letter: str) -> bool:
        return letter in self.column(kind)

    def name(self, kind: CriterionKind, letter: Optional[str]) -> str:
        if letter is None:
            return f"{kind.value} (unspecified)"
        return self.column(kind)[letter]

    @classmethod
    def load(cls, path: Union[str, os.PathLike]) -> "CriterionRegistry":
        parser = configparser.ConfigParser()
        # keep letters case-sensitive
        parser.optionxform = str  # type: ignore[assignment]
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
        base = cls.default()
        columns = {"form": dict(base.form), "content": dict(base.content)}
        for section in parser.sections():
            if section not in columns:
                raise ValueError(f"{path}: unknown section [{section}] (expected form/content)")
            entries = dict(parser.items(section))
            for letter in entries:
                if len(letter) != 1 or letter not in string.ascii_lowercase:
                    raise ValueError(f"{path}: criterion key {letter!r} must be one lowercase letter")
            columns[section] = entries
        return cls(columns["form"], columns["content"])

    @classmethod
    def from_env(cls, path: Optional[Union[str, os.PathLike]] = None) -> "CriterionRegistry":
        path = path or os.environ.get(ENV_VAR)
        if path:
            return cls.load(Path(path))
        return cls.default()


DEFAULT_REGISTRY = CriterionRegistry.default()
