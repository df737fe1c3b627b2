"""Bundled templates for the five classical situations, and named small structures.

Preset names: ``a`` (chains), ``b`` (posets with a linear extension),
``c`` (a poset, a linear extension and a free linear order), ``d:n``
(``n`` free linear orders) and ``e:n`` (``n-1`` linear extensions of a
common partial order).  In ``e:n`` the shared partial order is template
element ``n``, so elements stay numbered ``1..t``.
"""
from __future__ import annotations

import re

from .errors import MultiposetError
from .order import Relation, Template
from .structure import Multiposet, chain


def preset_template(name: str) -> Template:
    name = name.strip().lower()
    if name == "a":
        return Template.from_pairs(1, [])
    if name == "b":
        return Template.from_pairs(2, [(1, 2)])
    if name == "c":
        return Template.from_pairs(3, [(1, 2)])
    match = re.fullmatch(r"([de]):(\d+)", name)
    if match:
        n = int(match.group(2))
        if match.group(1) == "d":
            if n < 1:
                raise MultiposetError("preset d:n needs n >= 1")
            return Template.from_pairs(n, [])
        if n < 2:
            raise MultiposetError("preset e:n needs n >= 2")
        return Template.from_pairs(n, [(n, i) for i in range(1, n)])
    raise MultiposetError(f"unknown preset template {name!r}")


def named_structure(name: str, slots: int) -> Multiposet | None:
    """``point``, ``chainN`` or ``antichainN`` (diagonal in every slot); ``None`` if not a name."""
    name = name.strip().lower()
    if name == "point":
        return chain(1, slots)
    match = re.fullmatch(r"chain(\d+)", name)
    if match and int(match.group(1)) >= 1:
        return chain(int(match.group(1)), slots)
    match = re.fullmatch(r"antichain(\d+)", name)
    if match and int(match.group(1)) >= 1:
        n = int(match.group(1))
        return Multiposet(n, (Relation.diagonal(n),) * slots)
    return None
