import re

import pytest

from polyproof.surface import Factor, InitialPoly, Product, raw_term


@pytest.fixture
def worked_example() -> InitialPoly:
    """The two-product reference polynomial used across golden tests.

    (2*x_2^2)*(3*x_2^1 + 4) + (5*x_1^2 + x_1^1*x_2^1)*(3*x_1^1)*(2)
    """
    p1 = Product(
        (
            Factor((raw_term(2, [(2, 2)]),)),
            Factor((raw_term(3, [(2, 1)]), raw_term(4, []))),
        )
    )
    p2 = Product(
        (
            Factor((raw_term(5, [(1, 2)]), raw_term(1, [(1, 1), (2, 1)]))),
            Factor((raw_term(3, [(1, 1)]),)),
            Factor((raw_term(2, []),)),
        )
    )
    return InitialPoly((p1, p2))


def squeeze(tokens) -> str:
    """Whitespace-free text, for comparisons against printed-style strings."""
    if isinstance(tokens, str):
        return tokens.replace(" ", "")
    return "".join(tokens)


def tok(squeezed: str) -> list[str]:
    """Tokens of a whitespace-free printed-style expression (atomic numbers)."""
    return re.sub(r"([()+*^#\[\]$])", r" \1 ", squeezed).split()
