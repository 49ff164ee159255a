"""Line-oriented model files.

::

    # comments start with '#'
    sft n 2
    row 1 1
    row 1 0
    potential phi depth 1
    1 0.5
    2 -1.0
    roof tau depth 2
    11 1.0
    12 2.0
    21 1.5
    fiber g depth 1
    1 0.0 1.0       # g(x, t) = t on the cylinder [1]
    2 2.0

Symbols are 1-based.  Words are digit strings when the alphabet has at most
nine symbols and dot-separated otherwise (``10.2.3``); the dotted form is
accepted for any alphabet.  Every block lists each admissible word of its
depth exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError
from .potential import LcPotential, Roof
from .sft import Sft, validate
from .suspension import FiberPotential

BLOCK_KINDS = ("potential", "roof", "fiber")


@dataclass
class ModelFile:
    sft: Sft
    potentials: dict[str, LcPotential] = field(default_factory=dict)
    roofs: dict[str, Roof] = field(default_factory=dict)
    fibers: dict[str, FiberPotential] = field(default_factory=dict)

    def to_text(self) -> str:
        n = self.sft.n
        lines = [f"sft n {n}"]
        lines += ["row " + " ".join(str(int(b)) for b in row) for row in self.sft.a]
        for kind, table in (("potential", self.potentials), ("roof", self.roofs)):
            for name, p in table.items():
                lines.append(f"{kind} {name} depth {p.depth}")
                lines += [f"{format_word(w, n)} {v!r}" for w, v in p.items()]
        for name, g in self.fibers.items():
            lines.append(f"fiber {name} depth {g.depth}")
            for w, cs in g.items():
                lines.append(format_word(w, n) + " " + " ".join(repr(float(c)) for c in cs))
        return "\n".join(lines) + "\n"


def format_word(word, n: int) -> str:
    if n <= 9:
        return "".join(str(s + 1) for s in word)
    return ".".join(str(s + 1) for s in word)


def parse_word(token: str, n: int) -> tuple[int, ...]:
    """1-based token to a 0-based symbol tuple; raises ValueError when malformed."""
    parts = token.split(".") if ("." in token or n > 9) else list(token)
    word = tuple(int(p) - 1 for p in parts)
    if not word or any(s < 0 or s >= n for s in word):
        raise ValueError(f"symbols must lie in 1..{n}")
    return word


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse(text: str) -> ModelFile:
    lines = [(i + 1, _strip(raw)) for i, raw in enumerate(text.splitlines())]
    lines = [(no, s) for no, s in lines if s]
    if not lines:
        raise ParseError(1, "empty model")
    no, head = lines[0]
    tok = head.split()
    if len(tok) != 3 or tok[0] != "sft" or tok[1] != "n":
        raise ParseError(no, "expected 'sft n <N>'")
    try:
        n = int(tok[2])
    except ValueError:
        raise ParseError(no, f"bad alphabet size {tok[2]!r}") from None
    if n < 1:
        raise ParseError(no, "alphabet size must be positive")
    rows = []
    for i in range(1, n + 1):
        if i >= len(lines):
            raise ParseError(lines[-1][0], f"expected {n} 'row' lines")
        no, s = lines[i]
        tok = s.split()
        if tok[0] != "row":
            raise ParseError(no, "expected 'row <bits>'")
        if len(tok) != n + 1 or any(b not in ("0", "1") for b in tok[1:]):
            raise ParseError(no, f"row needs {n} entries, each 0 or 1")
        rows.append([int(b) for b in tok[1:]])
    sft = validate(np.array(rows), n)
    model = ModelFile(sft)

    pos = n + 1
    while pos < len(lines):
        no, s = lines[pos]
        tok = s.split()
        if tok[0] not in BLOCK_KINDS:
            raise ParseError(no, f"unknown key {tok[0]!r}")
        if len(tok) != 4 or tok[2] != "depth":
            raise ParseError(no, f"expected '{tok[0]} <name> depth <k>'")
        kind, name = tok[0], tok[1]
        try:
            depth = int(tok[3])
        except ValueError:
            raise ParseError(no, f"bad depth {tok[3]!r}") from None
        if depth < 1:
            raise ParseError(no, "depth must be at least 1")
        table = {"potential": model.potentials, "roof": model.roofs, "fiber": model.fibers}[kind]
        if name in table:
            raise ParseError(no, f"duplicate {kind} name {name!r}")
        header = no
        pos += 1
        entries: dict[tuple[int, ...], list[float]] = {}
        mask = sft.mask(depth)
        while pos < len(lines) and lines[pos][1].split()[0] not in BLOCK_KINDS:
            no, s = lines[pos]
            tok = s.split()
            try:
                word = parse_word(tok[0], n)
            except ValueError as exc:
                raise ParseError(no, f"bad word {tok[0]!r}: {exc}") from None
            if len(word) != depth:
                raise ParseError(no, f"word {tok[0]!r} has length {len(word)}, expected {depth}")
            if not mask[word]:
                raise ParseError(no, f"word {tok[0]!r} is not admissible")
            if word in entries:
                raise ParseError(no, f"word {tok[0]!r} listed twice")
            try:
                vals = [float(v) for v in tok[1:]]
            except ValueError:
                raise ParseError(no, "values must be real numbers") from None
            if not all(np.isfinite(vals)):
                raise ParseError(no, "values must be finite")
            if kind == "fiber" and not vals:
                raise ParseError(no, "fiber lines need at least one coefficient")
            if kind != "fiber" and len(vals) != 1:
                raise ParseError(no, "expected exactly one value")
            entries[word] = vals
            pos += 1
        if len(entries) != int(mask.sum()):
            raise ParseError(header, f"{kind} {name!r} lists {len(entries)} of {int(mask.sum())} admissible words")
        if kind == "fiber":
            try:
                table[name] = FiberPotential.from_mapping(sft, depth, entries)
            except ValidationError as exc:
                raise ParseError(header, str(exc)) from None
        else:
            pot = LcPotential.from_mapping(sft, depth, {w: v[0] for w, v in entries.items()})
            table[name] = Roof.of(pot) if kind == "roof" else pot
    return model


def read_model(path) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
