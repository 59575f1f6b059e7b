"""Built-in example charts shipped as spec files."""

from __future__ import annotations

from importlib import resources

from ..chart import ChartSpec, load_spec

BUILTIN = ("schwarzschild", "kottler", "example3")


class UnknownCorpusError(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown corpus chart {self.name!r}; choose from {', '.join(BUILTIN)}"


def corpus_document(name: str) -> bytes:
    """Raw spec-file bytes of a built-in chart."""
    if name not in BUILTIN:
        raise UnknownCorpusError(name)
    return resources.files(__package__).joinpath(f"{name}.json").read_bytes()


_cache: dict[str, ChartSpec] = {}


def load_corpus(name: str) -> ChartSpec:
    if name not in _cache:
        _cache[name] = load_spec(corpus_document(name))
    return _cache[name]
