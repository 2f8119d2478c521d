"""Parsers and writers for the three on-disk formats.

* DIMACS CNF: ``c`` comments, ``p cnf n m`` header, 0-terminated clauses.
* CSP: ``c`` comments, ``p csp d n m`` header; each constraint is a list of
  "variable forbidden-value" pairs terminated by 0, meaning the disjunction
  of (x_v != c) literals.
* Covering-code files: header ``q t r size``, then one word per line as
  space-separated symbols in 1..q.

All parsers accept bytes or str (ASCII, LF or CRLF), never raise anything but
ParseError on malformed input, and report 1-based line numbers.
"""

from __future__ import annotations

import warnings

from .cnf import Formula
from .codes import CoveringCode
from .csp import CspFormula
from .errors import ParseError, ParseWarning


def _decode(text: str | bytes) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not ASCII: {exc}") from None
    return text


def _int_token(token: str, line: int, what: str = "token") -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {token!r}", line) from None


def _normalize_clause(lits: list[int]) -> tuple[int, ...] | None:
    """Deduplicate literals; return None for tautological clauses.

    A clause containing both x and -x is always satisfied and is dropped,
    preserving satisfiability while keeping the distinct-variables invariant.
    """
    seen: dict[int, int] = {}
    out: list[int] = []
    for u in lits:
        v = abs(u)
        prev = seen.get(v)
        if prev is None:
            seen[v] = u
            out.append(u)
        elif prev != u:
            return None
    return tuple(out)


def parse_dimacs(text: str | bytes) -> Formula:
    """Parse DIMACS CNF text into a Formula.

    Clause-count mismatches against the header produce a ParseWarning;
    out-of-range variables are hard errors.
    """
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    raw_count = 0
    current: list[int] = []
    open_clause_line = None
    for lineno, line in enumerate(_decode(text).splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {stripped!r}", lineno)
            num_vars = _int_token(parts[2], lineno, "variable count")
            num_clauses = _int_token(parts[3], lineno, "clause count")
            if num_vars < 0 or num_clauses < 0:
                raise ParseError("header counts must be non-negative", lineno)
            continue
        if num_vars is None:
            raise ParseError(f"clause data before 'p cnf' header: {stripped!r}", lineno)
        for token in stripped.split():
            lit = _int_token(token, lineno, "literal")
            if lit == 0:
                raw_count += 1
                normalized = _normalize_clause(current)
                if normalized is not None:
                    clauses.append(normalized)
                current = []
                open_clause_line = None
            else:
                if abs(lit) > num_vars:
                    raise ParseError(
                        f"variable {abs(lit)} out of range (header declares {num_vars})", lineno
                    )
                current.append(lit)
                if open_clause_line is None:
                    open_clause_line = lineno
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("unterminated clause at end of input (missing 0)", open_clause_line)
    if num_clauses is not None and raw_count != num_clauses:
        warnings.warn(
            ParseWarning(f"header declares {num_clauses} clauses, file has {raw_count}"),
            stacklevel=2,
        )
    return Formula(num_vars, tuple(clauses))


def write_dimacs(f: Formula) -> str:
    """Canonical DIMACS text: header then one 0-terminated clause per line."""
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for clause in f.clauses:
        lines.append(" ".join(str(u) for u in clause) + (" 0" if clause else "0"))
    return "\n".join(lines) + "\n"


def _normalize_constraint(pairs: list[tuple[int, int]], line: int) -> tuple[tuple[int, int], ...] | None:
    """Deduplicate pairs; drop tautologies (two forbidden values for one var).

    A constraint with (x != a) and (x != b) for a != b is satisfied by every
    assignment, mirroring the CNF tautology rule.
    """
    seen: dict[int, int] = {}
    out: list[tuple[int, int]] = []
    for v, c in pairs:
        prev = seen.get(v)
        if prev is None:
            seen[v] = c
            out.append((v, c))
        elif prev != c:
            return None
    if not out:
        raise ParseError("constraint with zero literals", line)
    return tuple(out)


def parse_csp(text: str | bytes) -> CspFormula:
    """Parse 'p csp' text into a CspFormula."""
    header = None
    constraints: list[tuple[tuple[int, int], ...]] = []
    raw_count = 0
    current: list[int] = []
    open_line = None
    for lineno, line in enumerate(_decode(text).splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if header is not None:
                raise ParseError("duplicate header", lineno)
            parts = stripped.split()
            if len(parts) != 5 or parts[1] != "csp":
                raise ParseError(f"malformed header {stripped!r}", lineno)
            d = _int_token(parts[2], lineno, "domain size")
            n = _int_token(parts[3], lineno, "variable count")
            m = _int_token(parts[4], lineno, "constraint count")
            if d < 1 or n < 0 or m < 0:
                raise ParseError("header counts out of range", lineno)
            header = (d, n, m)
            continue
        if header is None:
            raise ParseError(f"constraint data before 'p csp' header: {stripped!r}", lineno)
        d, n, _ = header
        for token in stripped.split():
            value = _int_token(token, lineno)
            if value == 0:
                if len(current) % 2 != 0:
                    raise ParseError("constraint has a dangling variable without a value", lineno)
                pairs = [(current[i], current[i + 1]) for i in range(0, len(current), 2)]
                for v, c in pairs:
                    if not 1 <= v <= n:
                        raise ParseError(f"variable {v} out of range (header declares {n})", lineno)
                    if not 1 <= c <= d:
                        raise ParseError(f"value {c} outside domain 1..{d}", lineno)
                raw_count += 1
                normalized = _normalize_constraint(pairs, lineno)
                if normalized is not None:
                    constraints.append(normalized)
                current = []
                open_line = None
            else:
                current.append(value)
                if open_line is None:
                    open_line = lineno
    if header is None:
        raise ParseError("missing 'p csp' header")
    if current:
        raise ParseError("unterminated constraint at end of input (missing 0)", open_line)
    d, n, m = header
    if raw_count != m:
        warnings.warn(
            ParseWarning(f"header declares {m} constraints, file has {raw_count}"),
            stacklevel=2,
        )
    return CspFormula(d, n, tuple(constraints))


def write_csp(f: CspFormula) -> str:
    """Canonical CSP text: header then one 0-terminated constraint per line."""
    lines = [f"p csp {f.domain_size} {f.num_vars} {len(f.constraints)}"]
    for constraint in f.constraints:
        flat = " ".join(f"{v} {c}" for v, c in constraint)
        lines.append(flat + (" 0" if flat else "0"))
    return "\n".join(lines) + "\n"


def write_code(code: CoveringCode) -> str:
    """Serialize a covering code: 'q t r size' header, one word per line."""
    if code.t < 1:
        raise ValueError("length-0 codes have no file representation")
    lines = [f"{code.q} {code.t} {code.r} {len(code.words)}"]
    for word in code.words:
        lines.append(" ".join(str(s) for s in word))
    return "\n".join(lines) + "\n"


def read_code(text: str | bytes) -> CoveringCode:
    """Parse a covering-code file. The verified flag is NOT restored; run
    verify_cover (or verifycode) to re-establish it."""
    lines = [
        (i, line.strip())
        for i, line in enumerate(_decode(text).splitlines(), start=1)
        if line.strip() and not line.strip().startswith("c")
    ]
    if not lines:
        raise ParseError("missing code header")
    head_line, head = lines[0]
    parts = head.split()
    if len(parts) != 4:
        raise ParseError(f"malformed code header {head!r}", head_line)
    q = _int_token(parts[0], head_line, "alphabet size")
    t = _int_token(parts[1], head_line, "word length")
    r = _int_token(parts[2], head_line, "radius")
    size = _int_token(parts[3], head_line, "code size")
    if q < 2 or t < 1 or not 0 <= r <= t or size < 0:
        raise ParseError("code header values out of range", head_line)
    if len(lines) - 1 != size:
        raise ParseError(f"header declares {size} words, file has {len(lines) - 1}", head_line)
    words = []
    for lineno, line in lines[1:]:
        symbols = tuple(_int_token(tok, lineno, "symbol") for tok in line.split())
        if len(symbols) != t:
            raise ParseError(f"word has length {len(symbols)}, expected {t}", lineno)
        for s in symbols:
            if not 1 <= s <= q:
                raise ParseError(f"symbol {s} outside alphabet 1..{q}", lineno)
        words.append(symbols)
    if len(set(words)) != len(words):
        raise ParseError("duplicate codeword in file")
    try:
        return CoveringCode(q, t, r, tuple(words))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
