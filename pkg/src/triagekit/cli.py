"""Command-line front door.

stdout carries data; diagnostics (including the seed header) go to
stderr. Usage errors exit 2, data errors exit 1 with a machine-readable
JSON object on stderr.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import learners
from .corpus import (
    ingest_requests,
    load_personnel_overrides,
    load_source_documents,
    parse_request,
)
from .errors import TriageKitError
from .extractive import EXTRACTIVE_METHODS, summarize_request
from .pipeline import PipelineConfig, load_bundle, process_request, save_bundle, train_all
from .rouge import RougeVariant, pairwise_matrix, score_against_gold
from .triage import TABLE_RECIPES, ablation_benchmark


def _fail(kind: str, message: str) -> None:
    click.echo(json.dumps({"error": kind, "message": message}), err=True)
    sys.exit(1)


def _note(message: str) -> None:
    click.echo(message, err=True)


@click.group()
def main():
    """Support-request triage engine."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def ingest(file):
    """Validate a JSONL corpus and print its composition."""
    try:
        requests = ingest_requests(file)
    except TriageKitError as exc:
        _fail(type(exc).__name__, str(exc))
    click.echo(
        json.dumps(
            {
                "requests": len(requests),
                "escalated": sum(1 for r in requests if r.escalated),
                "with_gold_summaries": sum(1 for r in requests if r.gold_summary),
                "with_tickets": sum(1 for r in requests if r.ticket),
            }
        )
    )


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--sources", "sources_path", type=click.Path(exists=True))
@click.option("--overrides", "overrides_path", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--seed", default=42, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def train(corpus_path, sources_path, overrides_path, config_path, seed, out_path):
    """Train the full pipeline and persist the bundle."""
    _note(f"# seed={seed}")
    try:
        requests = ingest_requests(corpus_path)
        documents = load_source_documents(sources_path) if sources_path else []
        overrides = load_personnel_overrides(overrides_path) if overrides_path else {}
        config = PipelineConfig()
        if config_path:
            config = PipelineConfig.from_dict(json.loads(Path(config_path).read_text("utf-8")))
        bundle = train_all(requests, documents, overrides, config, seed)
        save_bundle(bundle, out_path)
    except TriageKitError as exc:
        _fail(type(exc).__name__, str(exc))
    summary = {
        "bundle": str(out_path),
        "summarizer": bundle.summarizer_method,
        "escalation_f1": bundle.predictors.escalation.report.weighted.f1,
        "flags": bundle.flags,
    }
    if bundle.predictors.priority is not None:
        summary["priority_f1"] = bundle.predictors.priority.report.weighted.f1
    if bundle.predictors.assignment is not None:
        summary["assignment_f1"] = bundle.predictors.assignment.report.weighted.f1
    click.echo(json.dumps(summary))


def _summaries_for(requests, method, budget, seed, bundle):
    from .extractive import conversation_sentences, supervised_summarize

    out = {}
    for request in requests:
        if method == "supervised":
            sentences = conversation_sentences(request)
            out[request.id] = supervised_summarize(
                bundle.sentence_model, sentences, budget, request, request.id
            )
        else:
            out[request.id] = summarize_request(request, method=method, budget=budget, seed=seed)
    return out


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", default="textrank", show_default=True,
              type=click.Choice(EXTRACTIVE_METHODS))
@click.option("--budget", default=5, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--bundle", "bundle_path", type=click.Path(exists=True),
              help="Required for --method supervised.")
@click.option("--format", "fmt", default="text", type=click.Choice(["text", "json"]),
              show_default=True)
def summarize(file, method, budget, seed, bundle_path, fmt):
    """Summarize a plain-text FILE or every request of a .jsonl corpus."""
    _note(f"# seed={seed}")
    bundle = None
    if method == "supervised":
        if not bundle_path:
            raise click.UsageError("--method supervised needs --bundle")
        bundle = load_bundle(bundle_path)
    try:
        if str(file).endswith(".jsonl"):
            requests = ingest_requests(file)
        else:
            text = Path(file).read_text("utf-8")
            requests = [
                parse_request(
                    {
                        "id": Path(file).name,
                        "conversation": [{"speaker_role": "customer", "text": text}],
                        "subject": "",
                    }
                )
            ]
        summaries = _summaries_for(requests, method, budget, seed, bundle)
    except TriageKitError as exc:
        _fail(type(exc).__name__, str(exc))
    for request in requests:
        summary = summaries[request.id]
        if fmt == "json":
            click.echo(json.dumps(summary.to_record(), ensure_ascii=False))
        else:
            for sentence in summary.selected:
                click.echo(sentence.text)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--methods", default="sumbasic,edmundson,steinberger_lsa,lda,textrank",
              show_default=True, help="Comma-separated method list.")
@click.option("--variant", default="rouge_su", show_default=True,
              type=click.Choice(["rouge_n", "rouge_su"]))
@click.option("--n", "ngram_n", default=2, show_default=True)
@click.option("--max-skip", "max_skip", default=-1, show_default=True,
              help="-1 means unlimited.")
@click.option("--budget", default=5, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--bundle", "bundle_path", type=click.Path(exists=True))
@click.option("--format", "fmt", default="text", type=click.Choice(["text", "csv", "json"]),
              show_default=True)
def evaluate(corpus_path, methods, variant, ngram_n, max_skip, budget, seed, bundle_path, fmt):
    """Per-method scores against gold summaries plus the pairwise matrix."""
    _note(f"# seed={seed}")
    method_list = [m.strip() for m in methods.split(",") if m.strip()]
    for method in method_list:
        if method not in EXTRACTIVE_METHODS:
            raise click.UsageError(f"unknown method {method!r}")
    bundle = load_bundle(bundle_path) if bundle_path else None
    if "supervised" in method_list and bundle is None:
        raise click.UsageError("supervised evaluation needs --bundle")
    rouge_variant = (
        RougeVariant(kind="n", n=ngram_n)
        if variant == "rouge_n"
        else RougeVariant(kind="su", max_skip=None if max_skip < 0 else max_skip)
    )
    try:
        requests = ingest_requests(corpus_path)
        token_summaries = {}
        for method in method_list:
            summaries = _summaries_for(requests, method, budget, seed, bundle)
            token_summaries[method] = {rid: s.tokens() for rid, s in summaries.items()}
        matrix = pairwise_matrix(token_summaries, rouge_variant)

        gold_requests = [r for r in requests if r.gold_summary is not None]
        gold_scores = None
        if gold_requests:
            from .extractive import conversation_sentences

            golds = {}
            for request in gold_requests:
                wanted = set(request.gold_summary.sentence_indices)
                tokens = []
                for sentence in conversation_sentences(request):
                    if sentence.origin in wanted:
                        tokens.extend(sentence.normalized_tokens)
                golds[request.id] = tokens
            subset = {
                method: {rid: token_summaries[method][rid] for rid in golds}
                for method in method_list
            }
            gold_scores = score_against_gold(subset, golds, rouge_variant)
    except TriageKitError as exc:
        _fail(type(exc).__name__, str(exc))

    if fmt == "json":
        payload = {"pairwise": json.loads(matrix.to_json())}
        if gold_scores:
            payload["against_gold"] = {
                method: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
                for method, s in gold_scores.items()
            }
        click.echo(json.dumps(payload, indent=2))
    elif fmt == "csv":
        click.echo(matrix.to_csv(), nl=False)
        if gold_scores:
            click.echo("method,precision,recall,f1")
            for method, s in gold_scores.items():
                click.echo(f"{method},{s.precision:.6f},{s.recall:.6f},{s.f1:.6f}")
    else:
        click.echo("Pairwise mean F1 (row = candidate, column = reference):")
        click.echo(matrix.to_text())
        if gold_scores:
            click.echo("")
            click.echo("Against gold summaries:")
            click.echo(f"{'method':<20}{'P':>8}{'R':>8}{'F1':>8}")
            for method, s in gold_scores.items():
                click.echo(f"{method:<20}{s.precision:>8.2f}{s.recall:>8.2f}{s.f1:>8.2f}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--task", required=True, type=click.Choice(["escalation", "priority", "assignment"]))
@click.option("--families", default="naive_bayes,svm,random_forest", show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--folds", default=5, show_default=True)
@click.option("--full-grid", is_flag=True, help="Use the published parameter grids.")
@click.option("--format", "fmt", default="text", type=click.Choice(["text", "csv", "json"]),
              show_default=True)
def benchmark(corpus_path, task, families, seed, folds, full_grid, fmt):
    """Family x recipe ablation grid for one prediction task."""
    _note(f"# seed={seed}")
    family_list = [f.strip() for f in families.split(",") if f.strip()]
    for family in family_list:
        if family not in learners.FAMILIES:
            raise click.UsageError(f"unknown family {family!r}")
    try:
        requests = ingest_requests(corpus_path)
        from .triage import BenchmarkReport

        report = BenchmarkReport(task=task, seed=seed)
        for family in family_list:
            partial = ablation_benchmark(
                requests,
                task,
                families=[family],
                recipes=TABLE_RECIPES[task],
                seed=seed,
                folds=folds,
                grid=learners.DEFAULT_GRIDS[family] if full_grid else None,
            )
            report.rows.extend(partial.rows)
    except TriageKitError as exc:
        _fail(type(exc).__name__, str(exc))
    if fmt == "json":
        click.echo(report.to_json())
    elif fmt == "csv":
        click.echo(report.to_csv(), nl=False)
    else:
        click.echo(report.to_text())


@main.command()
@click.argument("request_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True))
@click.option("--timings/--no-timings", default=True, show_default=True)
def triage(request_file, bundle_path, timings):
    """Produce a TriageSuggestion for one request JSON file."""
    try:
        record = json.loads(Path(request_file).read_text("utf-8"))
        request = parse_request(record)
        bundle = load_bundle(bundle_path)
        suggestion = process_request(bundle, request)
    except (TriageKitError, ValueError) as exc:
        _fail(type(exc).__name__, str(exc))
    click.echo(json.dumps(suggestion.to_dict(include_timings=timings), ensure_ascii=False))


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--bundle", "bundle_path", envvar="TRIAGEKIT_BUNDLE", type=click.Path(exists=True))
@click.option("--port", default=8400, show_default=True, envvar="TRIAGEKIT_PORT")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--event-log", "event_log_path", type=click.Path())
def serve(corpus_path, bundle_path, port, host, event_log_path):
    """Start the human-in-the-loop review service."""
    import uvicorn

    from .service import EventLog, TriageService, create_app

    try:
        requests = ingest_requests(corpus_path)
        bundle = load_bundle(bundle_path) if bundle_path else None
    except TriageKitError as exc:
        _fail(type(exc).__name__, str(exc))
    log = EventLog.read(event_log_path) if event_log_path else EventLog(None)
    service = TriageService(requests=requests, bundle=bundle, event_log=log)
    app = create_app(service)
    _note(f"# serving on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
