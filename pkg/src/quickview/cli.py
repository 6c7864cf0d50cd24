"""Command line front end.

Subcommands: stats (corpus statistics), summarize (run the extractive
pipeline over a dataset), evaluate (ROUGE-2 report of predictions against
references), export (build fine-tuning pairs from summaries + gold labels).

Outputs are written atomically (temp file + rename) and each output file
gets a ``<name>.manifest.json`` sidecar recording the exact configuration,
inputs and tool version, so any artifact can be reproduced.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig
from .corpus import (
    DatasetError,
    corpus_stats,
    default_abbreviations,
    load_abbreviations,
    load_clusters,
)
from .pipeline import export_finetune_pairs, read_quickviews, summarize_cluster
from .provider import ProviderError, open_backend
from .rouge import evaluate_corpus

__all__ = ["main", "build_parser"]

# argparse dests that map one-to-one onto RunConfig keys
_FLAG_KEYS = (
    "provider",
    "endpoint",
    "mode",
    "top_m",
    "top_n",
    "damping",
    "tolerance",
    "max_iter",
    "jobs",
)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input dataset or predictions file")
    common.add_argument("--output", help="output file to write")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--provider", choices=("tfidf", "external"))
    common.add_argument("--endpoint", help="external provider: tcp://host:port or a command line")
    common.add_argument("--mode", choices=("correlation", "textrank", "pipeline"))
    common.add_argument("--top-m", dest="top_m", type=int, help="sentences kept per document in phase 1")
    common.add_argument("--top-n", dest="top_n", type=int, help="sentences kept by graph ranking in phase 2")
    common.add_argument("--damping", type=float)
    common.add_argument("--tolerance", type=float)
    common.add_argument("--max-iter", dest="max_iter", type=int)
    common.add_argument("--jobs", type=int, help="parallel cluster workers")
    common.add_argument(
        "--print-config",
        action="store_true",
        help="print the effective configuration as JSON and exit",
    )

    parser = argparse.ArgumentParser(
        prog="quickview",
        description="Extractive multi-document summarization and ROUGE-2 evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("stats", parents=[common], help="corpus statistics report")
    sub.add_parser("summarize", parents=[common], help="summarize every cluster of a dataset")

    evaluate = sub.add_parser("evaluate", parents=[common], help="score predictions against references")
    evaluate.add_argument("--references", help="reference dataset with gold summaries")

    export = sub.add_parser("export", parents=[common], help="write (summary, gold label) pairs")
    export.add_argument("--quickviews", help="summaries file produced by the summarize command")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig()
        if args.config:
            cfg.apply_file(args.config)
        cfg.apply_env()
        cfg.apply_flags({key: getattr(args, key) for key in _FLAG_KEYS})
        if args.print_config:
            json.dump(cfg.as_dict(), sys.stdout, indent=2)
            sys.stdout.write("\n")
            return 0
        cfg.validate()
        command = {
            "stats": cmd_stats,
            "summarize": cmd_summarize,
            "evaluate": cmd_evaluate,
            "export": cmd_export,
        }[args.command]
        return command(args, cfg)
    except (ConfigError, DatasetError, ProviderError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _required(args: argparse.Namespace, name: str) -> Path:
    value = getattr(args, name)
    if not value:
        raise ConfigError(f"--{name.replace('_', '-')} is required for this command")
    return Path(value)


def _abbreviations(cfg: RunConfig):
    if cfg.abbreviations:
        return load_abbreviations(cfg.abbreviations)
    return default_abbreviations()


@contextmanager
def _atomic_text(path: Path):
    """Stream that becomes `path` on success and vanishes on failure."""
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=path.name + ".", suffix=".tmp")
    stream = os.fdopen(fd, "w", encoding="utf-8", newline="\n")
    try:
        yield stream
        stream.close()
        os.replace(tmp, path)
    except BaseException:
        stream.close()
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _write_manifest(
    output: Path,
    command: str,
    cfg: RunConfig,
    inputs: dict,
    started: float,
    extra: dict | None = None,
) -> None:
    manifest = {
        "tool": "quickview",
        "version": __version__,
        "command": command,
        "inputs": {key: str(value) for key, value in inputs.items()},
        "output": str(output),
        "config": cfg.as_dict(),
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    if extra:
        manifest.update(extra)
    sidecar = output.with_name(output.name + ".manifest.json")
    sidecar.write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def cmd_stats(args: argparse.Namespace, cfg: RunConfig) -> int:
    started = time.monotonic()
    input_path = _required(args, "input")
    clusters = load_clusters(input_path, abbreviations=_abbreviations(cfg))
    stats = corpus_stats(clusters, bucket_width=cfg.histogram_bucket)
    document_count = sum(len(c.documents) for c in clusters)

    print(f"clusters              {stats.cluster_count}")
    print(f"documents             {document_count}")
    print(f"avg docs per cluster  {stats.avg_docs_per_cluster:.3f}")
    print(f"avg document words    {stats.avg_doc_words:.2f}")
    print(f"max document words    {stats.max_doc_words}")
    print(f"document length histogram (bucket width {cfg.histogram_bucket} words)")
    peak = max(count for _, count in stats.doc_length_histogram) or 1
    for lo, count in stats.doc_length_histogram:
        bar = "#" * max(1, round(count / peak * 40)) if count else ""
        print(f"  {lo:>6}-{lo + cfg.histogram_bucket - 1:<6} {count:>6} {bar}")
    print(f"labeled clusters      {len(stats.length_pairs)}")
    if stats.length_pairs:
        print("length pairs (cluster avg words, summary words)")
        for avg_words, summary_words in stats.length_pairs:
            print(f"  {avg_words:.2f} {summary_words}")

    if args.output:
        output = Path(args.output)
        record = {
            "cluster_count": stats.cluster_count,
            "document_count": document_count,
            "avg_docs_per_cluster": stats.avg_docs_per_cluster,
            "avg_doc_words": stats.avg_doc_words,
            "max_doc_words": stats.max_doc_words,
            "bucket_width": cfg.histogram_bucket,
            "doc_length_histogram": [list(pair) for pair in stats.doc_length_histogram],
            "length_pairs": [list(pair) for pair in stats.length_pairs],
        }
        with _atomic_text(output) as stream:
            json.dump(record, stream, ensure_ascii=False, indent=2)
            stream.write("\n")
        _write_manifest(output, "stats", cfg, {"input": input_path}, started)
    return 0


def cmd_summarize(args: argparse.Namespace, cfg: RunConfig) -> int:
    started = time.monotonic()
    input_path = _required(args, "input")
    output = _required(args, "output")
    abbreviations = _abbreviations(cfg)
    clusters = load_clusters(input_path, abbreviations=abbreviations)
    if not clusters:
        raise ValueError(f"{input_path}: dataset contains no clusters")
    length_model = cfg.length_model(clusters) if cfg.length == "fit" else cfg.length_model()
    pipeline_cfg = cfg.pipeline_config(length_model, abbreviations)

    with open_backend(cfg.provider_config()) as backend:
        def run_one(cluster):
            provider = backend.provider_for(cluster)
            return summarize_cluster(cluster, pipeline_cfg, provider, mode=cfg.mode)

        if cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                summaries = list(pool.map(run_one, clusters))
        else:
            summaries = [run_one(cluster) for cluster in clusters]

    with _atomic_text(output) as stream:
        for summary in summaries:
            record = {"cluster_id": summary.cluster_id, "summary": summary.text}
            stream.write(json.dumps(record, ensure_ascii=False) + "\n")
    stale = sum(1 for s in summaries if s.diagnostics.get("converged") is False)
    _write_manifest(
        output,
        "summarize",
        cfg,
        {"input": input_path},
        started,
        extra={"clusters": len(summaries), "not_converged": stale},
    )
    if stale:
        print(f"warning: ranking did not converge for {stale} clusters", file=sys.stderr)
    print(f"wrote {len(summaries)} summaries to {output}", file=sys.stderr)
    return 0


def cmd_evaluate(args: argparse.Namespace, cfg: RunConfig) -> int:
    started = time.monotonic()
    predictions_path = _required(args, "input")
    references_path = _required(args, "references")
    predictions = read_quickviews(predictions_path)
    references = load_clusters(
        references_path, abbreviations=_abbreviations(cfg), segment=False
    )

    pairs = []
    ids = []
    unlabeled = 0
    for cluster in references:
        if cluster.gold_summary is None:
            unlabeled += 1
            continue
        if cluster.id not in predictions:
            raise ValueError(f"no prediction for cluster {cluster.id!r}")
        pairs.append((predictions[cluster.id], cluster.gold_summary))
        ids.append(cluster.id)
    if unlabeled:
        print(
            f"warning: skipped {unlabeled} reference clusters without gold summaries",
            file=sys.stderr,
        )
    unmatched = sorted(set(predictions) - set(ids))
    if unmatched:
        print(
            f"warning: ignoring {len(unmatched)} predictions with no reference"
            f" cluster (first: {unmatched[0]!r})",
            file=sys.stderr,
        )

    aggregate, per_pair = evaluate_corpus(pairs)
    width = max(7, max(len(i) for i in ids))
    print(f"{'cluster':<{width}}  {'R2-F1':>8}  {'R2-P':>8}  {'R2-R':>8}")
    for cluster_id, score in zip(ids, per_pair):
        print(
            f"{cluster_id:<{width}}  {score.f1:>8.4f}"
            f"  {score.precision:>8.4f}  {score.recall:>8.4f}"
        )
    print(
        f"{'ALL':<{width}}  {aggregate.f1:>8.4f}"
        f"  {aggregate.precision:>8.4f}  {aggregate.recall:>8.4f}"
    )
    record = {
        "r2_f1": aggregate.f1,
        "r2_p": aggregate.precision,
        "r2_r": aggregate.recall,
    }
    print(json.dumps(record))

    if args.output:
        output = Path(args.output)
        record["per_cluster"] = [
            {
                "cluster_id": cluster_id,
                "r2_f1": score.f1,
                "r2_p": score.precision,
                "r2_r": score.recall,
            }
            for cluster_id, score in zip(ids, per_pair)
        ]
        with _atomic_text(output) as stream:
            json.dump(record, stream, ensure_ascii=False, indent=2)
            stream.write("\n")
        _write_manifest(
            output,
            "evaluate",
            cfg,
            {"input": predictions_path, "references": references_path},
            started,
        )
    return 0


def cmd_export(args: argparse.Namespace, cfg: RunConfig) -> int:
    started = time.monotonic()
    input_path = _required(args, "input")
    quickviews_path = _required(args, "quickviews")
    output = _required(args, "output")
    clusters = load_clusters(
        input_path, abbreviations=_abbreviations(cfg), segment=False
    )
    quickviews = read_quickviews(quickviews_path)

    with _atomic_text(output) as stream:
        skipped = export_finetune_pairs(clusters, quickviews, stream)
    _write_manifest(
        output,
        "export",
        cfg,
        {"input": input_path, "quickviews": quickviews_path},
        started,
        extra={"records": len(clusters) - skipped, "skipped_unlabeled": skipped},
    )
    if skipped:
        print(
            f"warning: skipped {skipped} clusters without gold summaries",
            file=sys.stderr,
        )
    print(f"wrote {len(clusters) - skipped} pairs to {output}", file=sys.stderr)
    return 0
