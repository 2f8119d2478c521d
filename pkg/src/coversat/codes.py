"""q-ary covering codes: volumes, size bounds, constructions, verification.

Words are tuples of symbols in 1..q, length t. A code has covering radius r
when every word of {1..q}^t lies within Hamming distance r of some codeword.
Internally words map to integers via the mixed-radix index
``sum((sym_i - 1) * q^(t-1-i))``, so numeric order equals lexicographic order.
"""

from __future__ import annotations

import math
import os
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import CodeConstructionError, ResourceCapError

Word = tuple[int, ...]

GREEDY_MAX_SPACE = 1 << 20
VERIFY_MAX_SPACE = 10**7
CONCAT_MAX_WORDS = 5 * 10**6


@dataclass
class CoveringCode:
    """A set of distinct words claimed to cover {1..q}^t at radius r.

    ``verified`` is set by verify_cover (or by constructions that are
    covering by construction) and is excluded from equality so that file
    round-trips compare equal.
    """

    q: int
    t: int
    r: int
    words: tuple[Word, ...]
    verified: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError("alphabet size must be >= 2")
        if self.t < 0 or not 0 <= self.r <= max(self.t, 0):
            raise ValueError(f"invalid length/radius (t={self.t}, r={self.r})")
        for word in self.words:
            if len(word) != self.t:
                raise ValueError(f"word {word} has length {len(word)}, expected {self.t}")
            for s in word:
                if not 1 <= s <= self.q:
                    raise ValueError(f"symbol {s} outside alphabet 1..{self.q}")
        self.words = tuple(sorted(set(self.words)))

    def __len__(self) -> int:
        return len(self.words)


def word_distance(a: Word, b: Word) -> int:
    """Hamming distance between two equal-length words."""
    if len(a) != len(b):
        raise ValueError("words of different length")
    return sum(x != y for x, y in zip(a, b))


def _check_params(q: int, t: int, r: int) -> None:
    if q < 2:
        raise ValueError("alphabet size must be >= 2")
    if t < 0:
        raise ValueError("word length must be >= 0")
    if not 0 <= r <= t:
        raise ValueError(f"radius must lie in [0, {t}], got {r}")


def shell_volume(q: int, t: int, r: int) -> int:
    """Number of words at distance exactly r from a fixed center:
    C(t,r) * (q-1)^r."""
    _check_params(q, t, r)
    return math.comb(t, r) * (q - 1) ** r


def ball_volume(q: int, t: int, r: int) -> int:
    """Number of words within distance <= r of a fixed center (exact)."""
    _check_params(q, t, r)
    return sum(math.comb(t, i) * (q - 1) ** i for i in range(r + 1))


def code_size_bound(q: int, t: int, r: int) -> int:
    """Probabilistic-existence size target: ceil(t ln(q) q^t / shell).

    Evaluated in floating point; when the value sits within 1e-9 of an
    integer the next integer up is used, since the bound is an existence
    target rather than a contract.
    """
    _check_params(q, t, r)
    if t == 0:
        return 1
    x = t * math.log(q) * q**t / shell_volume(q, t, r)
    nearest = round(x)
    if abs(x - nearest) < 1e-9:
        return int(nearest) + 1
    return math.ceil(x)


def _index_of(word: Word, q: int) -> int:
    idx = 0
    for s in word:
        idx = idx * q + (s - 1)
    return idx


def _word_of(idx: int, q: int, t: int) -> Word:
    digits = [0] * t
    for pos in range(t - 1, -1, -1):
        idx, d = divmod(idx, q)
        digits[pos] = d + 1
    return tuple(digits)


def _xor_masks(t: int, r: int) -> list[int]:
    """All t-bit masks of popcount <= r (binary ball as XOR deltas)."""
    masks = [0]
    for s in range(1, r + 1):
        for positions in combinations(range(t), s):
            m = 0
            for p in positions:
                m |= 1 << (t - 1 - p)
            masks.append(m)
    return masks


def _ball_of(idx: int, q: int, t: int, r: int) -> list[int]:
    """Indices of all words within distance <= r of idx (general alphabet)."""
    digits = []
    x = idx
    for _ in range(t):
        x, d = divmod(x, q)
        digits.append(d)
    digits.reverse()
    pows = [q ** (t - 1 - pos) for pos in range(t)]
    result = [idx]
    for s in range(1, r + 1):
        for combo in combinations(range(t), s):
            choices = []
            for pos in combo:
                d = digits[pos]
                w = pows[pos]
                choices.append([(nd - d) * w for nd in range(q) if nd != d])
            for deltas in product(*choices):
                result.append(idx + sum(deltas))
    return result


def verify_cover(code: CoveringCode) -> bool:
    """Exhaustively check the covering property; sets code.verified.

    Runs a multi-source BFS out to depth r from all codewords, so the cost
    is O(q^t * t * q) regardless of code size.
    """
    q, t, r = code.q, code.t, code.r
    space = q**t
    if space > VERIFY_MAX_SPACE:
        raise ResourceCapError(
            f"q^t = {space} exceeds exhaustive-verification cap {VERIFY_MAX_SPACE}; "
            "use spot_check_cover instead"
        )
    if t == 0:
        code.verified = len(code.words) > 0
        return code.verified
    seen = bytearray(space)
    queue = deque()
    for word in code.words:
        idx = _index_of(word, q)
        if not seen[idx]:
            seen[idx] = 1
            queue.append((idx, 0))
    count = len(queue)
    pows = [q ** (t - 1 - pos) for pos in range(t)]
    while queue:
        idx, dist = queue.popleft()
        if dist == r:
            continue
        x = idx
        for pos in range(t - 1, -1, -1):
            x, d = divmod(x, q)
            w = pows[pos]
            base = idx - d * w
            for nd in range(q):
                if nd != d:
                    nb = base + nd * w
                    if not seen[nb]:
                        seen[nb] = 1
                        count += 1
                        queue.append((nb, dist + 1))
    code.verified = count == space
    return code.verified


def spot_check_cover(code: CoveringCode, samples: int = 100_000, seed: int = 0) -> bool:
    """Randomized covering check for spaces too large to enumerate."""
    rng = random.Random(f"spot:{seed}")
    words = code.words
    for _ in range(samples):
        w = tuple(rng.randint(1, code.q) for _ in range(code.t))
        if all(word_distance(w, c) > code.r for c in words):
            return False
    return True


def random_code(
    q: int, t: int, r: int, target_size: int, seed: int = 0, retries: int = 10
) -> CoveringCode:
    """Sample target_size words i.i.d. uniform and verify; retry with derived
    seeds up to `retries` attempts, then fail.

    Duplicates among the samples are collapsed, so the returned code may hold
    fewer than target_size distinct words.
    """
    _check_params(q, t, r)
    if target_size < 1:
        raise ValueError("target_size must be >= 1")
    if q**t > VERIFY_MAX_SPACE:
        raise ResourceCapError(f"q^t = {q**t} too large to verify a random code")
    for attempt in range(retries):
        rng = random.Random(f"randcode:{seed}:{attempt}")
        words = tuple(
            tuple(rng.randint(1, q) for _ in range(t)) for _ in range(target_size)
        )
        code = CoveringCode(q, t, r, words)
        if verify_cover(code):
            return code
    raise CodeConstructionError(
        f"no covering code of size {target_size} found for (q={q}, t={t}, r={r}) "
        f"after {retries} attempts (seed {seed}); raise target_size"
    )


def greedy_code(q: int, t: int, r: int) -> CoveringCode:
    """Greedy set cover over {1..q}^t with radius-r balls as the sets.

    Repeatedly picks the center covering the most uncovered words, breaking
    ties toward the lexicographically smallest center. Coverage counts are
    kept per center, so total work is O(q^t * ball_volume).
    """
    _check_params(q, t, r)
    space = q**t
    if space > GREEDY_MAX_SPACE:
        raise ResourceCapError(f"q^t = {space} exceeds greedy-construction cap {GREEDY_MAX_SPACE}")
    if t == 0:
        return CoveringCode(q, 0, 0, ((),), verified=True)
    vol = ball_volume(q, t, r)
    masks = _xor_masks(t, r) if q == 2 else None
    gain = [vol] * space
    covered = bytearray(space)
    uncovered = space
    centers: list[int] = []
    while uncovered:
        best = 0
        best_gain = -1
        for idx in range(space):
            g = gain[idx]
            if g > best_gain:
                best_gain = g
                best = idx
        centers.append(best)
        ball = [best ^ m for m in masks] if masks is not None else _ball_of(best, q, t, r)
        for p in ball:
            if not covered[p]:
                covered[p] = 1
                uncovered -= 1
                if masks is not None:
                    for c in [p ^ m for m in masks]:
                        gain[c] -= 1
                else:
                    for c in _ball_of(p, q, t, r):
                        gain[c] -= 1
    words = tuple(_word_of(idx, q, t) for idx in centers)
    return CoveringCode(q, t, r, words, verified=True)


def concatenate(c1: CoveringCode, c2: CoveringCode) -> CoveringCode:
    """Blockwise product code: length t1+t2, radius r1+r2, sizes multiply.

    Covering holds coordinate-blockwise, so the verified flag propagates
    without re-verification.
    """
    if c1.q != c2.q:
        raise ValueError(f"alphabet mismatch ({c1.q} vs {c2.q})")
    if len(c1.words) * len(c2.words) > CONCAT_MAX_WORDS:
        raise ResourceCapError("concatenated code would exceed the word-count cap")
    words = tuple(w1 + w2 for w1 in c1.words for w2 in c2.words)
    code = CoveringCode(c1.q, c1.t + c2.t, c1.r + c2.r, words)
    code.verified = c1.verified and c2.verified
    return code


def _ceil_fraction(x: float) -> int:
    # guards against float noise just above an integer boundary
    return math.ceil(x - 1e-9)


def boolean_cover(
    n: int, rho: float, b: int, *, cache_dir: str | os.PathLike | None = None
) -> CoveringCode:
    """Covering code for {0,1}^n built from greedy blocks of length b.

    Each full block is a greedy code of radius ceil(rho*b); a shorter final
    block covers the residual coordinates at the same radius fraction. The
    returned radius is the realized per-block sum, which may exceed rho*n
    slightly when blocks round up. Every block is exhaustively re-verified
    before use.
    """
    if not 0 < rho <= 0.5:
        raise ValueError("rho must lie in (0, 1/2]")
    if not 1 <= b <= 20:
        raise ValueError("block length must lie in 1..20")
    if n == 0:
        return CoveringCode(2, 0, 0, ((),), verified=True)
    b = min(b, n)
    block = get_code(2, b, _ceil_fraction(rho * b), "greedy", cache_dir=cache_dir)
    if not verify_cover(block):
        raise CodeConstructionError(f"greedy block (2, {b}) failed verification")
    result = block
    for _ in range(n // b - 1):
        result = concatenate(result, block)
    rem = n % b
    if rem:
        tail = get_code(2, rem, _ceil_fraction(rho * rem), "greedy", cache_dir=cache_dir)
        if not verify_cover(tail):
            raise CodeConstructionError(f"greedy block (2, {rem}) failed verification")
        result = concatenate(result, tail)
    return result


_memory_cache: dict[tuple, CoveringCode] = {}


def get_code(
    q: int,
    t: int,
    r: int,
    method: str = "greedy",
    *,
    size: int | None = None,
    seed: int = 0,
    cache_dir: str | os.PathLike | None = None,
) -> CoveringCode:
    """Construct a code, reusing an in-memory and optional on-disk cache.

    Cache keys include the construction method so greedy and random codes
    never alias. Disk entries are re-verified on load and rebuilt if stale.
    """
    if method not in ("greedy", "random"):
        raise ValueError(f"unknown construction method {method!r}")
    key = (q, t, r, method, size, seed)
    path = None
    if cache_dir is not None:
        name = f"{method}_q{q}_t{t}_r{r}"
        if method == "random":
            name += f"_s{size}_seed{seed}"
        path = os.path.join(cache_dir, name + ".code")
    code = _memory_cache.get(key)
    if code is not None:
        if path is not None and not os.path.exists(path):
            _write_code_file(code, cache_dir, path)
        return code
    if path is not None:
        if os.path.exists(path):
            from .errors import ParseError
            from .formats import read_code  # local import; formats imports this module

            try:
                with open(path, "rb") as fh:
                    cached = read_code(fh.read())
            except (ParseError, OSError):
                cached = None  # stale or corrupt cache entry: rebuild
            if (
                cached is not None
                and (cached.q, cached.t, cached.r) == (q, t, r)
                and verify_cover(cached)
            ):
                _memory_cache[key] = cached
                return cached
    if method == "greedy":
        code = greedy_code(q, t, r)
    else:
        code = random_code(q, t, r, size if size is not None else code_size_bound(q, t, r), seed)
    _memory_cache[key] = code
    if path is not None:
        _write_code_file(code, cache_dir, path)
    return code


def _write_code_file(code: CoveringCode, cache_dir, path: str) -> None:
    from .formats import write_code

    os.makedirs(cache_dir, exist_ok=True)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(write_code(code))
