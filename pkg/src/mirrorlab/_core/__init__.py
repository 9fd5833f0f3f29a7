"""Hot-loop backend selection.

The batched game simulator and the prime-field kernels exist twice: a
compiled Cython module (``_fastcore``) and a pure-Python twin (``_pycore``).
The compiled one is preferred when importable; set ``MIRRORLAB_PURE_PYTHON=1``
to force the fallback.  Both implement the exact same deterministic
randomness protocol, so results are identical either way -- only speed
differs (see ``benchmarks/bench_core.py``).
"""

from __future__ import annotations

import os

from . import _pycore

try:
    if os.environ.get("MIRRORLAB_PURE_PYTHON"):
        raise ImportError("pure-Python core forced by MIRRORLAB_PURE_PYTHON")
    from . import _fastcore as _fast
except ImportError:
    _fast = None

HAVE_FAST = _fast is not None
BACKEND = "compiled" if HAVE_FAST else "python"

# Strategy codes understood by the compiled game loop.  Anything not listed
# here is simulated through the regular Python referee.
KERNEL_CODES = {
    "mirror": 1,
    "odd-mirror": 2,
    "tuple-mirror": 3,
    "naive": 4,
    "smallest-unsaid": 4,
    "largest-unsaid": 5,
    "random-unsaid": 6,
    "rand-log": 7,
    "rand-sqrt": 8,
}


def power_sums(xs, k: int, q: int) -> list[int]:
    if HAVE_FAST:
        return _fast.power_sums(list(xs), k, q)
    return _pycore.power_sums(xs, k, q)


def full_power_sums(n: int, k: int, q: int) -> list[int]:
    if HAVE_FAST:
        return _fast.full_power_sums(n, k, q)
    return _pycore.full_power_sums(n, k, q)


def poly_root_scan(e, n: int, q: int) -> list[int]:
    if HAVE_FAST:
        return _fast.poly_root_scan(list(e), n, q)
    return _pycore.poly_root_scan(e, n, q)


def matching_from_seed(n: int, seed: int) -> list[int]:
    if HAVE_FAST:
        return _fast.matching_from_seed(n, seed)
    return _pycore.matching_from_seed(n, seed)


def _kernel_args(config, alice_spec: str, bob_spec: str):
    """Codes plus sketch parameters, or None when the kernel can't run this."""
    from ..strategies import parse_spec

    aname, aparams = parse_spec(alice_spec)
    bname, bparams = parse_spec(bob_spec)
    if aparams or bparams:
        return None
    acode = KERNEL_CODES.get(aname)
    bcode = KERNEL_CODES.get(bname)
    if acode is None or bcode is None:
        return None
    if acode in (1, 3):  # mirror replies are Bob-side machines
        return None
    if bcode in (2, 7, 8):  # and these are Alice-side
        return None
    r = k = q = 0
    if acode == 8:
        from ..streamrec import sqrt_strategy_params

        r, k, field = sqrt_strategy_params(config.n)
        q = field.q
    return acode, bcode, r, k, q


_MASK64 = (1 << 64) - 1


def play_game(config, alice_spec: str, bob_spec: str, game_seed: int,
              *, force_python: bool = False):
    """One recorded game: (outcome_value, losing_number_or_0, moves).

    ``moves`` is a list of ("A"|"B", tuple_of_numbers).  Dispatches to the
    compiled loop when both strategies are kernel-codable.
    """
    if HAVE_FAST and not force_python:
        args = _kernel_args(config, alice_spec, bob_spec)
        if args is not None:
            _pycore.validate_matchup(config, alice_spec, bob_spec)
            return _fast.play_game(config.n, config.a, config.b,
                                       *args, game_seed & _MASK64)
    return _pycore.play_game(config, alice_spec, bob_spec, game_seed)


def play_batch(config, alice_spec: str, bob_spec: str, master_seed: int,
               start: int, trials: int, *, force_python: bool = False) -> dict:
    """Outcome counts over seeded trials start..start+trials-1."""
    if HAVE_FAST and not force_python:
        args = _kernel_args(config, alice_spec, bob_spec)
        if args is not None:
            _pycore.validate_matchup(config, alice_spec, bob_spec)
            return _fast.play_batch(config.n, config.a, config.b,
                                        *args, master_seed & _MASK64,
                                        start, trials)
    return _pycore.play_batch(config, alice_spec, bob_spec,
                              master_seed, start, trials)
