"""Command-line surface: ingest, build-index, query, serve, classify-logs, eval."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from groundline.analytics import default_taxonomies, read_log, run_pipeline, taxonomies_from_dir
from groundline.config import PipelineConfig
from groundline.corpus import build_corpus, ingest as ingest_stream, load_corpus, save_corpus
from groundline.engine import QueryEngine
from groundline.evalharness import (
    ConstantJudge,
    EvalQuery,
    LocalEngineSystem,
    RemoteJudge,
    ScriptedJudge,
    ScriptedSystem,
    report as eval_report,
    report_markdown,
    run_eval,
)
from groundline.index import build as build_index, load_cross_refs, load_indexes, save_indexes
from groundline.providers import RemoteCompletionProvider, stub_providers
from groundline.service import CorpusRegistry, ServiceStore, canonical_json, create_app


def _load_config(path: str | None) -> PipelineConfig:
    return PipelineConfig.load(path) if path else PipelineConfig()


def _engine_for(corpus_dir: str, index_dir: str | None, refs: str | None,
                config: PipelineConfig) -> QueryEngine:
    corpus = load_corpus(Path(corpus_dir))
    providers = stub_providers(embed_dim=config.embed_dim,
                               default_top_k=config.default_top_k)
    pairs = load_cross_refs(Path(refs)) if refs else None
    if index_dir and (Path(index_dir) / "header.json").exists():
        indexes = load_indexes(Path(index_dir), corpus, providers.embed)
    else:
        indexes = build_index(corpus, providers.embed, cross_ref_pairs=pairs,
                              k1=config.bm25_k1, b=config.bm25_b)
    return QueryEngine(indexes, providers, config)


@click.group()
def main():
    """Evidence-bounded retrieval and synthesis engine."""


@main.command("ingest")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def ingest_cmd(input_path: str, out_dir: str):
    """Ingest a JSONL document file into a corpus directory."""
    with open(input_path, "r", encoding="utf-8") as fh:
        documents, report = ingest_stream(fh)
    corpus = build_corpus(documents, report)
    save_corpus(corpus, Path(out_dir), report)
    for error in report.errors:
        click.echo(f"line {error.line}: {error.message}", err=True)
    for flag in report.flags:
        click.echo(f"flag {flag.doc_id} {flag.path}: {flag.reason}", err=True)
    click.echo(f"ingested {report.doc_count} documents, {report.node_count} nodes, "
               f"version {corpus.version.version_id}")
    if report.rejected:
        sys.exit(2)


@main.command("build-index")
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--refs", type=click.Path(exists=True), default=None,
              help="Optional refs.jsonl sidecar of cross-reference node pairs.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def build_index_cmd(corpus_dir: str, out_dir: str, refs: str | None, config_path: str | None):
    """Build and persist the graph, lexical, and vector indexes."""
    config = _load_config(config_path)
    corpus = load_corpus(Path(corpus_dir))
    providers = stub_providers(embed_dim=config.embed_dim)
    pairs = load_cross_refs(Path(refs)) if refs else None
    indexes = build_index(corpus, providers.embed, cross_ref_pairs=pairs,
                          k1=config.bm25_k1, b=config.bm25_b)
    save_indexes(indexes, Path(out_dir))
    click.echo(f"indexed {indexes.vectors.size} nodes into {out_dir}")


@main.command("query")
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True))
@click.option("--index", "index_dir", type=click.Path(), default=None)
@click.option("--refs", type=click.Path(exists=True), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--text", required=True)
@click.option("--render-language", default=None)
@click.option("--emit-trace", "trace_path", type=click.Path(), default=None,
              help="Write walk steps and packets as JSONL trace events.")
def query_cmd(corpus_dir: str, index_dir: str | None, refs: str | None,
              config_path: str | None, text: str, render_language: str | None,
              trace_path: str | None):
    """Run one query through the pipeline and print the answer envelope."""
    engine = _engine_for(corpus_dir, index_dir, refs, _load_config(config_path))
    envelope, trace = engine.answer(text, render_language=render_language)
    if trace_path:
        with open(trace_path, "w", encoding="utf-8") as fh:
            for event in trace.events:
                fh.write(canonical_json(event))
                fh.write("\n")
    click.echo(canonical_json(envelope.to_json()))


@main.command("serve")
@click.option("--corpus", "corpus_dirs", required=True, multiple=True,
              type=click.Path(exists=True),
              help="Corpus directory; repeat to keep older versions resolvable.")
@click.option("--index", "index_dir", type=click.Path(), default=None)
@click.option("--refs", type=click.Path(exists=True), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@click.option("--store", "store_path", type=click.Path(), default=None)
@click.option("--log-mirror", "log_mirror", type=click.Path(), default=None)
def serve_cmd(corpus_dirs: tuple[str, ...], index_dir: str | None, refs: str | None,
              config_path: str | None, port: int, host: str,
              store_path: str | None, log_mirror: str | None):
    """Serve the query API over HTTP. The first --corpus is the live one."""
    import uvicorn

    config = _load_config(config_path)
    engine = _engine_for(corpus_dirs[0], index_dir, refs, config)
    registry = CorpusRegistry()
    for extra in corpus_dirs[1:]:
        corpus = load_corpus(Path(extra))
        registry.add(build_index(corpus, engine.providers.embed))
    base = Path(store_path) if store_path else Path(corpus_dirs[0]) / "service.db"
    mirror = Path(log_mirror) if log_mirror else base.with_suffix(".log.jsonl")
    store = ServiceStore(base, mirror)
    app = create_app(engine, store, registry=registry)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("classify-logs")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True))
@click.option("--taxonomy", "taxonomy_dir", type=click.Path(exists=True), default=None,
              help="Directory of taxonomy JSON files; defaults to the shipped set.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--window-days", type=int, default=5)
def classify_logs_cmd(log_path: str, taxonomy_dir: str | None, out_path: str,
                      window_days: int):
    """Sessionize, classify, impute, and report over a query-log JSONL."""
    entries = read_log(Path(log_path))
    taxonomies = taxonomies_from_dir(Path(taxonomy_dir)) if taxonomy_dir \
        else default_taxonomies()
    providers = stub_providers()
    result = run_pipeline(entries, taxonomies, localizer=providers.localize,
                          window_days=window_days)
    Path(out_path).write_text(
        json.dumps(result.to_json(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    click.echo(f"classified {result.totals['entries']} entries -> {out_path}")


def _build_system(spec: dict):
    kind = spec.get("type", "scripted")
    if kind == "local":
        config = _load_config(spec.get("config"))
        engine = _engine_for(spec["corpus"], spec.get("index"), spec.get("refs"), config)
        return LocalEngineSystem(spec["id"], engine)
    if kind == "scripted":
        responses = {}
        if spec.get("responses"):
            responses = json.loads(Path(spec["responses"]).read_text(encoding="utf-8"))
        return ScriptedSystem(
            spec["id"], responses=responses,
            decline_regex=spec.get("decline_regex", r"^\s*I cannot answer"),
            decline_ids=spec.get("decline_ids", ()))
    raise click.ClickException(f"unknown system type {kind!r}")


def _build_judge(spec: dict):
    kind = spec.get("type", "constant")
    if kind == "constant":
        return ConstantJudge(spec["id"], int(spec.get("score", 8)))
    if kind == "scripted":
        schedule = {}
        sequences = None
        if spec.get("schedule"):
            schedule = json.loads(Path(spec["schedule"]).read_text(encoding="utf-8"))
        if spec.get("sequences"):
            sequences = json.loads(Path(spec["sequences"]).read_text(encoding="utf-8"))
        return ScriptedJudge(spec["id"], schedule, sequences)
    if kind == "remote":
        provider = RemoteCompletionProvider(role="judge", model=spec["model"],
                                            url=spec.get("url"))
        return RemoteJudge(spec["id"], provider)
    raise click.ClickException(f"unknown judge type {kind!r}")


@main.command("eval")
@click.option("--systems", "systems_path", required=True, type=click.Path(exists=True))
@click.option("--queries", "queries_path", required=True, type=click.Path(exists=True))
@click.option("--judges", "judges_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def eval_cmd(systems_path: str, queries_path: str, judges_path: str, out_dir: str):
    """Score systems on a query set with rubric judges."""
    systems = [_build_system(s) for s in
               json.loads(Path(systems_path).read_text(encoding="utf-8"))]
    judges = [_build_judge(j) for j in
              json.loads(Path(judges_path).read_text(encoding="utf-8"))]
    queries = []
    with open(queries_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                record = json.loads(line)
                queries.append(EvalQuery(id=record["id"], text=record["text"],
                                         category=record.get("category", "factual")))
    run = run_eval(systems, queries, judges)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = eval_report(run)
    (out / "report.json").write_text(
        json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    (out / "report.md").write_text(report_markdown(run), encoding="utf-8")
    with (out / "responses.jsonl").open("w", encoding="utf-8") as fh:
        for (system_id, query_id), response in run.responses.items():
            fh.write(canonical_json({
                "system": system_id, "query": query_id,
                "abstained": response.abstained, "text": response.text,
            }))
            fh.write("\n")
    click.echo(f"evaluated {len(systems)} systems x {len(queries)} queries -> {out_dir}")


if __name__ == "__main__":
    main()
