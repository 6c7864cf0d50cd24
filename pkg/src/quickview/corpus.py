"""Corpus data model and text preparation.

Clusters of topic-related news documents are the unit of work: each document
carries a title, an anchor text (the human-written lead, possibly empty) and
a body. Ingestion reads newline-delimited JSON records, segments bodies into
sentences and tokenizes them; everything downstream (similarity ranking,
ROUGE scoring, length statistics) consumes these types.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import string
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator

__all__ = [
    "Sentence",
    "Document",
    "Cluster",
    "CorpusStats",
    "DatasetError",
    "default_abbreviations",
    "load_clusters",
    "segment_sentences",
    "tokenize",
    "ngrams",
    "corpus_stats",
]


class DatasetError(ValueError):
    """Raised when an input dataset violates the record schema."""


@dataclass(frozen=True)
class Sentence:
    """One segmented sentence, addressable as (doc_index, sent_index)."""

    doc_index: int
    sent_index: int
    text: str
    tokens: tuple[str, ...]

    @property
    def ref(self) -> tuple[int, int]:
        return (self.doc_index, self.sent_index)


@dataclass(frozen=True)
class Document:
    """A news article: title, anchor text (lead), body, segmented sentences.

    ``sentences`` is empty until segmentation ran; when populated, sentence
    indices are contiguous from 0 and ordered by position in the body.
    """

    id: str
    title: str
    anchor_text: str
    body: str
    sentences: tuple[Sentence, ...] = ()


@dataclass(frozen=True)
class Cluster:
    """A set of topic-related documents, optionally with a gold summary."""

    id: str
    documents: tuple[Document, ...]
    gold_summary: str | None = None

    def __post_init__(self) -> None:
        if not self.documents:
            raise ValueError(f"cluster {self.id!r}: documents must be non-empty")
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ValueError(f"cluster {self.id!r}: duplicate document id {dup!r}")


@dataclass(frozen=True)
class CorpusStats:
    """Corpus-level length statistics.

    ``doc_length_histogram`` maps bucket lower bounds (in words) to document
    counts; counts sum to the total document count. ``length_pairs`` holds
    one (cluster average length, gold summary length) point per labeled
    cluster, sorted so the result is independent of cluster order.
    """

    cluster_count: int
    avg_docs_per_cluster: float
    avg_doc_words: float
    max_doc_words: int
    doc_length_histogram: tuple[tuple[int, int], ...]
    length_pairs: tuple[tuple[float, int], ...]


# Punctuation stripped from token edges. Interior punctuation survives so
# word-segmented compounds (hà_nội) and decimals (3.5) stay single tokens.
_EDGE_PUNCT = string.punctuation + "«»“”‘’…–—¿¡"

_TERMINALS = ".!?…"
_OPEN_QUOTES = "\"'«“‘(["
_CLOSE_QUOTES = "\"'»”’)]"


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, strip punctuation off token edges.

    Tokens that are pure punctuation are dropped. Total function: any input,
    including the empty string, yields a (possibly empty) token list.
    """
    out = []
    for raw in text.lower().split():
        tok = raw.strip(_EDGE_PUNCT)
        if tok:
            out.append(tok)
    return out


def ngrams(tokens: Iterable[str], n: int) -> Counter[tuple[str, ...]]:
    """All contiguous n-token windows, with multiplicity.

    The total multiplicity is max(0, len(tokens) - n + 1).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    toks = list(tokens)
    return Counter(tuple(toks[i : i + n]) for i in range(len(toks) - n + 1))


def default_abbreviations() -> frozenset[str]:
    """Abbreviations shipped with the package (Vietnamese titles + English)."""
    text = (resources.files("quickview") / "data" / "abbreviations.txt").read_text("utf-8")
    return _parse_abbreviations(text.splitlines())


def load_abbreviations(path: str | Path) -> frozenset[str]:
    """Read an abbreviation list: one entry per line, ``#`` comments."""
    return _parse_abbreviations(Path(path).read_text("utf-8").splitlines())


def _parse_abbreviations(lines: Iterable[str]) -> frozenset[str]:
    entries = set()
    for line in lines:
        entry = line.split("#", 1)[0].strip().rstrip(".")
        if entry:
            entries.add(entry)
    return frozenset(entries)


def segment_sentences(
    text: str,
    *,
    doc_index: int = 0,
    abbreviations: frozenset[str] | None = None,
) -> list[Sentence]:
    """Split text into sentences on terminal punctuation.

    A boundary is a run of terminal marks (. ! ? …), optionally followed by
    closing quotes/brackets, then whitespace, then an uppercase letter, an
    opening quote or a digit. No boundary is placed after a listed
    abbreviation, and decimal points never qualify (no whitespace follows
    them). Empty results and sentences with no tokens are dropped;
    ``sent_index`` is contiguous from 0 over what remains.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()

    boundaries = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        term_start = i
        while i < n and text[i] in _TERMINALS:
            i += 1
        j = i
        while j < n and text[j] in _CLOSE_QUOTES:
            j += 1
        if j >= n or not text[j].isspace():
            continue
        k = j
        while k < n and text[k].isspace():
            k += 1
        while k < n and text[k] in _OPEN_QUOTES:
            k += 1
        if k >= n or not (text[k].isupper() or text[k].isdigit()):
            continue
        if text[term_start] == "." and i - term_start == 1:
            if _preceding_word(text, term_start) in abbreviations:
                continue
        boundaries.append(j)

    sentences = []
    start = 0
    for b in boundaries + [n]:
        chunk = text[start:b].strip()
        start = b
        if not chunk:
            continue
        toks = tokenize(chunk)
        if not toks:
            continue
        sentences.append(
            Sentence(
                doc_index=doc_index,
                sent_index=len(sentences),
                text=chunk,
                tokens=tuple(toks),
            )
        )
    return sentences


def _preceding_word(text: str, pos: int) -> str:
    start = pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:pos].lstrip("".join(_OPEN_QUOTES))


def load_clusters(
    source: str | Path | IO[str] | IO[bytes] | Iterable[str],
    *,
    abbreviations: frozenset[str] | None = None,
    segment: bool = True,
) -> list[Cluster]:
    """Parse a newline-delimited JSON dataset into clusters.

    One cluster per line::

        {"cluster_id": str,
         "documents": [{"id": str, "title": str, "anchor_text": str, "body": str}, ...],
         "summary": str}            # optional

    Unknown fields are ignored; a missing ``anchor_text`` becomes the empty
    string. Malformed lines raise :class:`DatasetError` naming the line and
    field; duplicate cluster ids raise as well. Clusters are returned in
    input order with documents segmented (unless ``segment=False``).
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_clusters(fh, abbreviations=abbreviations, segment=segment)

    clusters: list[Cluster] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(record, dict):
            raise DatasetError(f"line {lineno}: record must be a JSON object")
        cluster = _parse_record(record, lineno, abbreviations, segment)
        if cluster.id in seen:
            raise DatasetError(f"line {lineno}: duplicate cluster id {cluster.id!r}")
        seen.add(cluster.id)
        clusters.append(cluster)
    return clusters


def _iter_lines(source: IO[str] | IO[bytes] | Iterable[str]) -> Iterator[str]:
    for raw in source:
        yield raw.decode("utf-8") if isinstance(raw, bytes) else raw


def _require(record: dict, key: str, lineno: int, where: str) -> object:
    if key not in record:
        raise DatasetError(f"line {lineno}: missing field {key!r} in {where}")
    value = record[key]
    if not isinstance(value, str) and key != "documents":
        raise DatasetError(f"line {lineno}: field {key!r} in {where} must be a string")
    return value


def _parse_record(
    record: dict, lineno: int, abbreviations: frozenset[str], segment: bool
) -> Cluster:
    cluster_id = _require(record, "cluster_id", lineno, "record")
    docs_raw = _require(record, "documents", lineno, "record")
    if not isinstance(docs_raw, list) or not docs_raw:
        raise DatasetError(
            f"line {lineno}: field 'documents' must be a non-empty array"
        )
    documents = []
    for pos, doc in enumerate(docs_raw):
        where = f"documents[{pos}]"
        if not isinstance(doc, dict):
            raise DatasetError(f"line {lineno}: {where} must be a JSON object")
        doc_id = _require(doc, "id", lineno, where)
        title = _require(doc, "title", lineno, where)
        body = _require(doc, "body", lineno, where)
        anchor = doc.get("anchor_text", "")
        if not isinstance(anchor, str):
            raise DatasetError(
                f"line {lineno}: field 'anchor_text' in {where} must be a string"
            )
        sentences = ()
        if segment:
            sentences = tuple(
                segment_sentences(body, doc_index=pos, abbreviations=abbreviations)
            )
        documents.append(
            Document(
                id=doc_id,
                title=title,
                anchor_text=anchor,
                body=body,
                sentences=sentences,
            )
        )
    summary = record.get("summary")
    if summary is not None and not isinstance(summary, str):
        raise DatasetError(f"line {lineno}: field 'summary' must be a string")
    try:
        return Cluster(id=cluster_id, documents=tuple(documents), gold_summary=summary)
    except ValueError as exc:
        raise DatasetError(f"line {lineno}: {exc}") from exc


def doc_word_count(document: Document) -> int:
    """Document length in words: token count of the body only."""
    return len(tokenize(document.body))


def cluster_average_length(cluster: Cluster) -> float:
    """Sum of all document lengths divided by the number of documents."""
    return sum(doc_word_count(d) for d in cluster.documents) / len(cluster.documents)


def corpus_stats(clusters: list[Cluster], *, bucket_width: int = 250) -> CorpusStats:
    """Aggregate corpus statistics; invariant under cluster reordering.

    Length pairs are emitted only for clusters carrying a gold summary.
    """
    if not clusters:
        raise ValueError("corpus_stats requires at least one cluster")
    if bucket_width < 1:
        raise ValueError(f"bucket_width must be >= 1, got {bucket_width}")

    lengths = [doc_word_count(d) for c in clusters for d in c.documents]
    total_docs = len(lengths)
    buckets = Counter((length // bucket_width) * bucket_width for length in lengths)
    top = max(buckets)
    histogram = tuple(
        (lo, buckets.get(lo, 0)) for lo in range(0, top + bucket_width, bucket_width)
    )

    pairs = sorted(
        (cluster_average_length(c), len(tokenize(c.gold_summary)))
        for c in clusters
        if c.gold_summary is not None
    )

    return CorpusStats(
        cluster_count=len(clusters),
        avg_docs_per_cluster=total_docs / len(clusters),
        avg_doc_words=sum(lengths) / total_docs,
        max_doc_words=max(lengths),
        doc_length_histogram=histogram,
        length_pairs=tuple(pairs),
    )
