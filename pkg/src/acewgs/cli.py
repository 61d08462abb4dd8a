"""Command-line entrypoints (thin wrappers over the module operations).

Every command exits 0 on success and nonzero with a single
machine-parseable line `error: <code>: <message>` on stderr otherwise.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from acewgs import __version__
from acewgs.errors import AcewgsError
from acewgs.config import AppConfig, load_config


def _fail(exc: Exception, code: str | None = None) -> "NoReturn":  # noqa: F821
    label = code or getattr(exc, "code", "error")
    click.echo(f"error: {label}: {exc}", err=True)
    sys.exit(2)


def _load(ctx) -> AppConfig:
    try:
        return load_config(ctx.obj)
    except AcewgsError as exc:
        _fail(exc)


def _client(config: AppConfig):
    from acewgs.llm import LlmClient
    return LlmClient(config.llm)


def _corpus(config: AppConfig, root: str | None = None):
    from acewgs.corpus import CorpusStore
    try:
        return CorpusStore.open(root or config.corpus.dir)
    except (AcewgsError, OSError) as exc:
        _fail(exc, code=getattr(exc, "code", "corpus_error"))


@click.group()
@click.version_option(__version__)
@click.option("-c", "--config", "config_path", envvar="ACEWGS_CONFIG",
              type=click.Path(), default=None, help="TOML config file.")
@click.pass_context
def main(ctx, config_path):
    """Research assistant for water-gas-shift catalyst design."""
    ctx.obj = config_path


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.pass_context
def ingest(ctx, directory):
    """Validate the corpus layout (manifest.csv + corpus/<ref>.txt)."""
    store = _corpus(_load(ctx), directory)
    warnings = store.validate_layout()
    click.echo(f"{len(store.articles)} articles in manifest")
    for line in warnings:
        click.echo(f"warning: {line}")
    click.echo(f"{len(store.articles) - len(warnings)} articles have full texts")


@main.group()
def index():
    """Build or query the vector index."""


@index.command("build")
@click.option("--out", type=click.Path(), default=None,
              help="Index file (default: <corpus>/index.awvx).")
@click.pass_context
def index_build(ctx, out):
    """Chunk and embed every article with a full text."""
    config = _load(ctx)
    from acewgs.comprehend import ComprehensionPipeline
    from acewgs.vindex import VectorIndex

    store = _corpus(config)
    pipeline = ComprehensionPipeline(store, VectorIndex(), _client(config),
                                     k=config.corpus.k,
                                     chunk_size=config.corpus.chunk_size,
                                     overlap=config.corpus.overlap)
    total = 0
    indexed = 0
    try:
        for article in store.articles:
            if not store.has_text(article.ref_id):
                continue
            total += pipeline.index_article(article.ref_id)
            indexed += 1
        path = Path(out) if out else config.corpus.effective_index_path
        pipeline.index.save(path)
    except AcewgsError as exc:
        _fail(exc)
    click.echo(f"indexed {indexed} articles, {total} chunks -> {path}")


@index.command("search")
@click.option("--ref", default=None, help="Restrict to one article.")
@click.option("-k", default=4, show_default=True, help="Hits to return.")
@click.argument("text")
@click.pass_context
def index_search(ctx, ref, k, text):
    """Embed TEXT and print the top-k chunks."""
    config = _load(ctx)
    from acewgs.vindex import VectorIndex

    path = config.corpus.effective_index_path
    if not path.is_file():
        _fail(FileNotFoundError(f"no index at {path}; run `acewgs index build`"),
              code="missing_index")
    try:
        idx = VectorIndex.load(path)
        query = _client(config).embed(text).values
        hits = idx.search(query, k=k, ref_filter=ref)
    except AcewgsError as exc:
        _fail(exc)
    for hit in hits:
        snippet = hit.chunk.text[:80].replace("\n", " ")
        click.echo(f"{hit.chunk.ref_id}\t{hit.chunk.seq}\t"
                   f"{hit.similarity:.4f}\t{snippet}")


@main.command()
@click.argument("dsl")
@click.pass_context
def query(ctx, dsl):
    """Execute a DSL query directly against the manifest (no LLM)."""
    config = _load(ctx)
    from acewgs.extract import ExtractFeature

    store = _corpus(config)
    try:
        result = ExtractFeature(client=None, manifest=store.articles).run_dsl(dsl)
    except AcewgsError as exc:
        _fail(exc)
    for line in result.table.to_lines():
        click.echo(line)


@main.command()
@click.argument("ref_id")
@click.argument("question")
@click.pass_context
def comprehend(ctx, ref_id, question):
    """Answer a question about one article (indexes it on the fly)."""
    config = _load(ctx)
    from acewgs.comprehend import ComprehensionPipeline
    from acewgs.vindex import VectorIndex

    store = _corpus(config)
    path = config.corpus.effective_index_path
    idx = VectorIndex.load(path) if path.is_file() else VectorIndex()
    pipeline = ComprehensionPipeline(store, idx, _client(config),
                                     k=config.corpus.k,
                                     chunk_size=config.corpus.chunk_size,
                                     overlap=config.corpus.overlap)
    try:
        if not pipeline.is_indexed(ref_id):
            pipeline.index_article(ref_id)
        answer = pipeline.answer(ref_id, question)
    except AcewgsError as exc:
        _fail(exc)
    click.echo(answer.text)
    spans = ", ".join(f"{s}:[{a},{b})" for s, a, b in answer.sources)
    click.echo(f"sources: {spans}")


@main.command()
@click.option("--settings", "settings_path", required=True,
              type=click.Path(exists=True), help="TOML parameter settings.")
@click.option("--wait/--no-wait", default=False,
              help="Print progress lines while the search runs.")
@click.option("--no-narrative", is_flag=True, default=False,
              help="Skip the LLM narrative (numbers only).")
@click.pass_context
def inverse(ctx, settings_path, wait, no_narrative):
    """Run the inverse model for a settings file; print the report JSON."""
    config = _load(ctx)
    from acewgs.catalog import Catalog
    from acewgs.inverse import ParameterSettings, render_report, run_inverse
    from acewgs.surrogate import load_bundle
    from importlib import resources

    try:
        settings = ParameterSettings.from_toml(settings_path)
        catalog = Catalog.load(config.service.catalog_path)
        if config.service.bundle_path:
            bundle = load_bundle(config.service.bundle_path)
        else:
            with resources.as_file(resources.files("acewgs")
                                   .joinpath("data/reference.bundle.json")) as p:
                bundle = load_bundle(p)

        def progress(done, total):
            if wait:
                click.echo(f"iteration {done}/{total}", err=True)

        solution = run_inverse(settings, catalog, bundle, config.pso,
                               risk_lambda=config.service.risk_lambda,
                               progress=progress)
        client = None if no_narrative else _client(config)
        report = render_report(solution, catalog, client)
    except AcewgsError as exc:
        _fail(exc)
    click.echo(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))


@main.command()
@click.pass_context
def serve(ctx):
    """Start the HTTP service (and the web UI when configured)."""
    config = _load(ctx)
    from acewgs import service

    try:
        service.serve(config)
    except AcewgsError as exc:
        _fail(exc)


@main.command("eval-run")
@click.argument("questions_file", type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Output JSONL file.")
@click.pass_context
def eval_run(ctx, questions_file, out_path):
    """Generate an answer per question line (for offline human scoring)."""
    config = _load(ctx)
    client = _client(config)
    questions = [line.strip() for line in
                 Path(questions_file).read_text(encoding="utf-8").splitlines()
                 if line.strip()]
    try:
        with Path(out_path).open("w", encoding="utf-8") as fh:
            for question in questions:
                result = client.generate(question)
                fh.write(json.dumps({
                    "question": question,
                    "model": result.model_name,
                    "text": result.text,
                    "latency_ms": result.latency_ms,
                }, ensure_ascii=False) + "\n")
    except AcewgsError as exc:
        _fail(exc)
    click.echo(f"wrote {len(questions)} answers to {out_path}")


@main.command("mock-llm")
@click.option("--port", default=11434, show_default=True)
@click.option("--mode", type=click.Choice(["echo", "canned"]), default="echo",
              show_default=True)
@click.option("--script", "script_path", type=click.Path(exists=True),
              default=None, help="JSON pattern->reply map for canned mode.")
def mock_llm(port, mode, script_path):
    """Run the deterministic mock backend (for demos and offline use)."""
    from acewgs.mockllm import MockLlmServer, MockScript

    if mode == "canned":
        script = MockScript.from_dsl_fixture(script_path) if script_path \
            else MockScript.canned_replies({"*": "OK"})
    else:
        script = MockScript.echo()
    try:
        server = MockLlmServer(script, port=port)
    except AcewgsError as exc:
        _fail(exc)
    click.echo(f"mock backend listening on {server.base_url}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.server_close()


if __name__ == "__main__":
    main()
