import random
from fractions import Fraction as F

import pytest

import sheafcalc as sc


@pytest.fixture
def rng():
    return random.Random(0xBA5EBA11)


def rand_tamarkin_barcode(
    rng: random.Random,
    max_bars: int = 4,
    inf_p: float = 0.25,
    degrees=(0, 1),
    lo: int = -10,
    hi: int = 10,
    max_len: int = 10,
) -> sc.GradedBarcode:
    bars = []
    for _ in range(rng.randint(1, max_bars)):
        a = F(rng.randint(lo, hi))
        if rng.random() < inf_p:
            iv = sc.interval(a, "+inf")
        else:
            iv = sc.interval(a, a + rng.randint(1, max_len))
        bars.append(sc.GradedBar(iv, rng.choice(degrees)))
    return sc.barcode(*bars)


def stratum_samples(b: sc.GradedBarcode):
    """Event values plus one interior point per stratum and both tails."""
    s = sc.spec(b)
    if not s:
        return [F(0)]
    pts = [s[0] - 1, s[-1] + 1] + list(s)
    pts.extend((a + c) / 2 for a, c in zip(s, s[1:]))
    return pts
