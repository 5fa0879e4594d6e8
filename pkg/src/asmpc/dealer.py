"""Trusted-dealer offline phase: triple generation, storage, and files.

Two allocation variants exist.  Standard triples share all of (a, b, c)
additively and back secure multiplication.  Resharing triples deliver a
whole to party 1 and b whole to party 2 with only c shared; they back the
resharing protocols, which divide by a and by e + b, so a and b are drawn
from the multiplicative mask distribution and are never zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TripleExhausted, TripleFileCorrupt
from .numeric import MaskSource
from .sharing import format_float, parse_float, share_additive

FILE_MAGIC = "asmpc-triples"
FILE_VERSION = "v1"


@dataclass(frozen=True)
class StandardSlice:
    """One party's view of a standard triple: shares of a, b, and c."""

    triple_id: int
    a: float
    b: float
    c: float


@dataclass(frozen=True)
class ResharingSlice:
    """One party's view of a resharing triple.

    `plain` is the whole mask this party holds (a on party 1, b on party 2);
    `c_share` is this party's additive share of c = a * b.
    """

    triple_id: int
    plain: float
    c_share: float


@dataclass
class TripleStore:
    """Per-party triple material with single-use cursors."""

    party: int
    session_id: int
    standard: list[StandardSlice] = field(default_factory=list)
    resharing: list[ResharingSlice] = field(default_factory=list)
    _std_cursor: int = 0
    _resh_cursor: int = 0

    def next_standard(self) -> StandardSlice:
        if self._std_cursor >= len(self.standard):
            raise TripleExhausted(
                f"standard triples exhausted after {self._std_cursor}")
        item = self.standard[self._std_cursor]
        self._std_cursor += 1
        return item

    def next_resharing(self) -> ResharingSlice:
        if self._resh_cursor >= len(self.resharing):
            raise TripleExhausted(
                f"resharing triples exhausted after {self._resh_cursor}")
        item = self.resharing[self._resh_cursor]
        self._resh_cursor += 1
        return item

    @property
    def cursors(self) -> tuple[int, int]:
        return (self._std_cursor, self._resh_cursor)

    def remaining(self) -> tuple[int, int]:
        return (len(self.standard) - self._std_cursor,
                len(self.resharing) - self._resh_cursor)


def generate_triples(count_standard: int, count_resharing: int,
                     masks: MaskSource, session_id: int = 0,
                     ) -> tuple[TripleStore, TripleStore]:
    """Generate both parties' slices for the requested triple counts."""
    if count_standard < 0 or count_resharing < 0:
        raise ValueError("triple counts must be nonnegative")
    p1 = TripleStore(party=1, session_id=session_id)
    p2 = TripleStore(party=2, session_id=session_id)
    for i in range(count_standard):
        a = masks.additive()
        b = masks.additive()
        c = a * b
        a_sh = share_additive(a, masks)
        b_sh = share_additive(b, masks)
        c_sh = share_additive(c, masks)
        p1.standard.append(StandardSlice(i, a_sh.share_p1, b_sh.share_p1, c_sh.share_p1))
        p2.standard.append(StandardSlice(i, a_sh.share_p2, b_sh.share_p2, c_sh.share_p2))
    for i in range(count_resharing):
        a = masks.multiplicative()
        b = masks.multiplicative()
        c_sh = share_additive(a * b, masks)
        p1.resharing.append(ResharingSlice(i, a, c_sh.share_p1))
        p2.resharing.append(ResharingSlice(i, b, c_sh.share_p2))
    return p1, p2


def write_triple_file(store: TripleStore, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{FILE_MAGIC} {FILE_VERSION} party={store.party} "
                 f"session={store.session_id}\n")
        for t in store.standard:
            fh.write(f"S,{t.triple_id},{format_float(t.a)},"
                     f"{format_float(t.b)},{format_float(t.c)}\n")
        for t in store.resharing:
            fh.write(f"R,{t.triple_id},{format_float(t.plain)},"
                     f"{format_float(t.c_share)}\n")


def read_triple_file(path) -> TripleStore:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        fields = header.split()
        if (len(fields) != 4 or fields[0] != FILE_MAGIC
                or fields[1] != FILE_VERSION
                or not fields[2].startswith("party=")
                or not fields[3].startswith("session=")):
            raise TripleFileCorrupt(f"bad header {header!r}", line=1)
        try:
            party = int(fields[2].split("=", 1)[1])
            session_id = int(fields[3].split("=", 1)[1])
        except ValueError:
            raise TripleFileCorrupt(f"bad header numbers in {header!r}", line=1)
        if party not in (1, 2):
            raise TripleFileCorrupt(f"party must be 1 or 2, got {party}", line=1)
        store = TripleStore(party=party, session_id=session_id)
        for lineno, raw in enumerate(fh, 2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            kind = parts[0]
            where = f"triple file line {lineno}"
            if kind == "S":
                if len(parts) != 5:
                    raise TripleFileCorrupt("standard record needs 5 fields", line=lineno)
                store.standard.append(StandardSlice(
                    _parse_id(parts[1], lineno),
                    parse_float(parts[2], where),
                    parse_float(parts[3], where),
                    parse_float(parts[4], where)))
            elif kind == "R":
                if len(parts) != 4:
                    raise TripleFileCorrupt("resharing record needs 4 fields", line=lineno)
                store.resharing.append(ResharingSlice(
                    _parse_id(parts[1], lineno),
                    parse_float(parts[2], where),
                    parse_float(parts[3], where)))
            else:
                raise TripleFileCorrupt(f"unknown triple kind {kind!r}", line=lineno)
    _check_ids(store)
    return store


def _parse_id(text: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise TripleFileCorrupt(f"bad triple id {text!r}", line=lineno)


def _check_ids(store: TripleStore) -> None:
    for name, items in (("standard", store.standard), ("resharing", store.resharing)):
        for pos, item in enumerate(items):
            if item.triple_id != pos:
                raise TripleFileCorrupt(
                    f"{name} triple ids must be consecutive from 0, "
                    f"got {item.triple_id} at position {pos}")
