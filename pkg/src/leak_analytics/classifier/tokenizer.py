"""Bag-of-words tokenization of URL templates."""

import re
from typing import List

DEFAULT_SEPARATORS = "./?&=:_,;"

# Placeholders survive tokenization as single tokens
PLACEHOLDER = re.compile(r"\(\.\*\)|<[A-Z][A-Z0-9_+]*>")


def _split(text: str, separators: str, lowercase: bool) -> List[str]:
    pattern = "[" + "".join(re.escape(ch) for ch in separators) + "]"
    parts = [part for part in re.split(pattern, text) if part]
    return [part.lower() for part in parts] if lowercase else parts


def tokenize_url(url_template: str, separators: str = DEFAULT_SEPARATORS, lowercase: bool = False) -> List[str]:
    """Split a URL template on separator characters.

    Args:
        url_template: URL with ``(.*)`` and ``<TYPE>`` placeholders
        separators: Characters that delimit tokens
        lowercase: Lowercase ordinary tokens (placeholders keep their case)

    Returns:
        List[str]: Tokens in order of appearance, empty segments dropped
    """
    tokens: List[str] = []
    position = 0
    for match in PLACEHOLDER.finditer(url_template):
        tokens.extend(_split(url_template[position:match.start()], separators, lowercase))
        tokens.append(match.group())
        position = match.end()
    tokens.extend(_split(url_template[position:], separators, lowercase))
    return tokens
