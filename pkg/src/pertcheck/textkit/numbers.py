import re

from ..exceptions import NotANumber

_ONES = (
    "zero one two three four five six seven eight nine ten eleven twelve thirteen "
    "fourteen fifteen sixteen seventeen eighteen nineteen"
).split()
_TENS = "_ _ twenty thirty forty fifty sixty seventy eighty ninety".split()
_SCALES = (
    "", "thousand", "million", "billion", "trillion", "quadrillion", "quintillion",
    "sextillion", "septillion", "octillion", "nonillion", "decillion",
)
_NUMERAL = re.compile(r"^(\d+|\d{1,3}(,\d{3})+)$")

NUMBER_WORDS = frozenset(_ONES) | frozenset(_TENS[2:]) | {"hundred"} | frozenset(s for s in _SCALES if s)


def _below_thousand(n):
    words = []
    if n >= 100:
        words += [_ONES[n // 100], "hundred"]
        n %= 100
    if n >= 20:
        words.append(_TENS[n // 10])
        n %= 10
        if n:
            words.append(_ONES[n])
    elif n:
        words.append(_ONES[n])
    return words


def number_to_words(numeral: str) -> str:
    """Spell out a non-negative integer numeral as long-form English.

    >>> number_to_words("127")
    'one hundred twenty seven'
    >>> number_to_words("1,990")
    'one thousand nine hundred ninety'
    """
    if not isinstance(numeral, str) or not _NUMERAL.match(numeral):
        raise NotANumber(f"not a digit string: {numeral!r}")
    n = int(numeral.replace(",", ""))
    if n == 0:
        return "zero"
    groups = []
    while n:
        groups.append(n % 1000)
        n //= 1000
    if len(groups) > len(_SCALES):
        raise NotANumber(f"numeral too large: {numeral!r}")
    words = []
    for scale in range(len(groups) - 1, -1, -1):
        g = groups[scale]
        if g:
            words += _below_thousand(g)
            if _SCALES[scale]:
                words.append(_SCALES[scale])
    return " ".join(words)
