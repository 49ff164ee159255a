"""Seeded random streams.

All randomness goes through :func:`make_rng`, which keys numpy's
``Philox4x64-10`` counter-based generator from ``SeedSequence(seed,
spawn_key=stream)``.  Independent sub-streams are addressed by integer tuples,
so results never depend on the order in which streams are consumed.

Test vectors (first three raw 64-bit outputs)::

    make_rng(0)      -> 259491006799949737, 4754966410622352325, 8698845897610382596
    make_rng(0, 1)   -> 12441188205270234579, 8834087402389068706, 5718262333018195187
"""

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    if seed < 0 or seed >= 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))
