"""Language resource bundle: synonyms, stems and function words.

These drive the synonym credit in EBLEU and the stem/synonym/function-word
stages of METEOR (the Polish-adapted variant simply loads Polish files).

File formats (all UTF-8, ``#``-prefixed lines are comments):

* synonyms:       ``word<TAB>syn1 syn2 ...``  (symmetric closure applied on load)
* stems:          ``word<TAB>stem1 stem2 ...``  (multiple stems per word allowed)
* function words: one word per line
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path


class ResourceFormatError(ValueError):
    """Raised when a resource file does not follow the documented format."""


def _norm(word: str) -> str:
    return unicodedata.normalize("NFC", word)


@dataclass
class LanguageResources:
    """Immutable-after-load resource bundle; shareable across threads.

    Words not present in the stem table implicitly stem to themselves, so a
    listed inflection (``dogs -> dog``) still matches an unlisted base form.
    """

    synonyms: dict[str, frozenset[str]] = field(default_factory=dict)
    stems: dict[str, frozenset[str]] = field(default_factory=dict)
    function_words: frozenset[str] = frozenset()
    function_word_weight: float = 0.2

    def __post_init__(self) -> None:
        if not 0.0 <= self.function_word_weight <= 1.0:
            raise ValueError("function_word_weight must lie in [0, 1]")

    def is_empty(self) -> bool:
        return not (self.synonyms or self.stems or self.function_words)

    def synonyms_of(self, word: str) -> frozenset[str]:
        return self.synonyms.get(word, frozenset())

    def stems_of(self, word: str) -> frozenset[str]:
        return self.stems.get(word, frozenset((word,)))

    def are_synonyms(self, a: str, b: str) -> bool:
        return b in self.synonyms_of(a)

    def share_stem(self, a: str, b: str) -> bool:
        return not self.stems_of(a).isdisjoint(self.stems_of(b))

    def token_weight(self, word: str) -> float:
        """Weight used by METEOR precision/recall: function words count less."""
        return self.function_word_weight if word in self.function_words else 1.0


def _data_lines(path: str | Path):
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def _load_tab_table(path: str | Path, kind: str) -> dict[str, set[str]]:
    table: dict[str, set[str]] = {}
    for lineno, line in _data_lines(path):
        if "\t" not in line:
            raise ResourceFormatError(f"{path}:{lineno}: expected 'word<TAB>{kind}...'")
        word, _, rest = line.partition("\t")
        word = _norm(word.strip())
        values = {_norm(v) for v in rest.split()}
        if not word or not values:
            raise ResourceFormatError(f"{path}:{lineno}: empty word or {kind} list")
        table.setdefault(word, set()).update(values)
    return table


def load_synonyms(path: str | Path) -> dict[str, frozenset[str]]:
    """Load a synonym table and apply the symmetric closure."""
    table = _load_tab_table(path, "synonym")
    closed: dict[str, set[str]] = {}
    for word, syns in table.items():
        for syn in syns:
            closed.setdefault(word, set()).add(syn)
            closed.setdefault(syn, set()).add(word)
    return {w: frozenset(s) for w, s in closed.items()}


def load_stems(path: str | Path) -> dict[str, frozenset[str]]:
    return {w: frozenset(s) for w, s in _load_tab_table(path, "stem").items()}


def load_function_words(path: str | Path) -> frozenset[str]:
    return frozenset(_norm(line) for _, line in _data_lines(path))


def load_resources(
    synonyms: str | Path | None = None,
    stems: str | Path | None = None,
    function_words: str | Path | None = None,
    function_word_weight: float = 0.2,
) -> LanguageResources:
    """Assemble a bundle from any subset of the three resource files."""
    return LanguageResources(
        synonyms=load_synonyms(synonyms) if synonyms else {},
        stems=load_stems(stems) if stems else {},
        function_words=load_function_words(function_words) if function_words else frozenset(),
        function_word_weight=function_word_weight,
    )
