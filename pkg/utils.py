import re
from typing import Iterable, Optional, Sequence, Union

# --------------------------------------------------
# Words and symbol naming
# --------------------------------------------------
# A word is a tuple of symbol ids. Symbols are arbitrary strings, so the
# textual form of a word depends on the alphabet: when every symbol is a
# single character the word is written without separators ("0110"),
# otherwise symbols are separated by commas ("ab,cd,ab").

Word = tuple[str, ...]

PAIR_SEPARATOR = ":"
BLOCK_SEPARATOR = "."
ROUTE_SEPARATOR = "~"
ROUTE_LABEL_SEPARATOR = "/"

# derived names are built with these, so user ids may not contain them
RESERVED_NAME_CHARS = PAIR_SEPARATOR + BLOCK_SEPARATOR + ROUTE_SEPARATOR + ROUTE_LABEL_SEPARATOR

_SPLIT_RE = re.compile(r"[,\s]+")


def is_single_char(alphabet: Iterable[str]) -> bool:
    """True iff every symbol of the alphabet is exactly one character."""
    return all(len(a) == 1 for a in alphabet)


def parse_word(text: Union[str, Sequence[str]], alphabet: Iterable[str]) -> Word:
    """
    Turn a textual word into a tuple of symbols.

    Lists and tuples are taken as already split. Strings are split per
    character for single-character alphabets and on commas/whitespace
    otherwise. No membership check is done here; unknown symbols simply
    produce words outside the language.
    """
    if not isinstance(text, str):
        return tuple(str(a) for a in text)
    if is_single_char(alphabet):
        return tuple(text.replace(",", "").replace(" ", ""))
    text = text.strip()
    if not text:
        return ()
    return tuple(part for part in _SPLIT_RE.split(text) if part)


def format_word(word: Sequence[str], alphabet: Iterable[str]) -> str:
    """Inverse of parse_word for reports and diagnostics."""
    if is_single_char(alphabet):
        return "".join(word)
    return ",".join(word)


def block_name(block: Sequence[str], alphabet: Iterable[str]) -> str:
    """Name of a higher-block symbol made from `block`."""
    if len(block) == 1:
        return block[0]
    if is_single_char(alphabet):
        return "".join(block)
    return BLOCK_SEPARATOR.join(block)


def pair_name(left: str, right: str) -> str:
    """Name of a product symbol or product state."""
    return f"{left}{PAIR_SEPARATOR}{right}"


def reserved_in(name: str) -> Optional[str]:
    """First character of `name` that derived names use as a separator, or None."""
    return next((c for c in name if c in RESERVED_NAME_CHARS), None)
