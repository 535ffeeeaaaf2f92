import warnings

import pytest

from qmul import blocks, multipliers, oracle

warnings.filterwarnings("ignore", message="modulus .* is odd but not prime")


def primes_for_width(n: int) -> list[int]:
    return oracle.primes_in_range(2 ** (n - 1), 2 ** n)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def construction_catalog() -> list:
    """Representative circuits spanning every builder, for structural and
    permutation-level property tests."""
    cat = [
        blocks.build_adder(4, carry_out=True),
        blocks.build_adder(4, carry_out=False),
        blocks.build_adder(3, carry_out=True, carry_in="qubit"),
        blocks.build_adder(3, carry_out=False, carry_in="one"),
        blocks.build_subtractor(4, borrow_out=True),
        blocks.build_subtractor(4, borrow_out=False),
        blocks.build_controlled_adder(4, carry_out=True),
        blocks.build_controlled_adder(4, carry_out=False),
        blocks.build_controlled_addsub(4, carry_out=True),
        blocks.build_controlled_addsub(4, carry_out=False),
        blocks.build_const_adder(5, 19),
        blocks.build_lookup(blocks.LookupSpec(2, (0, 13, 26, 39), 6)),
        multipliers.build_schoolbook(3, "classic"),
        multipliers.build_schoolbook(3, "addsub"),
        multipliers.build_mod2n(4, "classic"),
        multipliers.build_mod2n(4, "addsub"),
    ]
    params = multipliers.ModPParams(13, 4, 2)
    cat.append(multipliers.build_modp(params, "classic"))
    cat.append(multipliers.build_modp(params, "addsub"))
    cat.append(multipliers.build_modmultstep(params, 0, "classic"))
    cat.append(multipliers.build_modmultstep(params, 0, "addsub"))
    cat.append(multipliers.uncompute_garbage(params, "addsub"))
    cat.append(multipliers.build_modp(multipliers.ModPParams(19, 5, 3), "addsub"))
    return cat


@pytest.fixture(scope="session")
def catalog():
    return construction_catalog()
