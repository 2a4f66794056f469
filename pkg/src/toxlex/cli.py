"""Command-line interface.

Subcommands: score, analyze, anonymize, suggest, lexicon validate, serve.
`score` exits 0 for clean text, 2 when the message is flagged
anti-Semitic (so shell pipelines can filter on the exit code), and 1 on
any error. TOXLEX_LEXICON and TOXLEX_SECRET provide defaults for the
lexicon path and the hex privacy secret.
"""

from __future__ import annotations

import json
import sys

import click

from . import corpus as corpus_mod
from .errors import ToxlexError
from .expand import ExpandConfig, enqueue_candidates, suggest_candidates
from .lexicon import Lexicon, parse_lexicon, serialize_lexicon
from .matcher import CompiledLexicon, compile_lexicon
from .privacy import PrivacyConfig, redact
from .scorer import ANSI, HTML, PLAIN, ScoreConfig, render_highlights, score_message
from .service import EngineState, ServiceConfig, Snapshot, create_app, score_response

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FLAGGED = 2

_lexicon_option = click.option(
    "--lexicon", "lexicon_path", envvar="TOXLEX_LEXICON", required=True,
    help="Path to the lexicon TSV (or set TOXLEX_LEXICON).",
)
_secret_option = click.option(
    "--secret-hex", envvar="TOXLEX_SECRET", default=None,
    help="Hex-encoded privacy secret, >= 16 bytes (or set TOXLEX_SECRET).",
)
_config_option = click.option(
    "--config", "config_path", default=None, type=click.Path(),
    help="JSON config file; the privacy secret is read from privacy.secret.",
)


def _secret_from_config(config_path: str | None) -> str | None:
    if not config_path:
        return None
    with open(config_path, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    return (config.get("privacy") or {}).get("secret")


def _load(lexicon_path: str) -> tuple[Lexicon, CompiledLexicon]:
    with open(lexicon_path, "r", encoding="utf-8") as fh:
        lexicon = parse_lexicon(fh)
    return lexicon, compile_lexicon(lexicon)


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_ERROR)


def _score_overrides(points: int | None, threshold: int | None) -> ScoreConfig:
    kwargs = {}
    if points is not None:
        kwargs["points_per_level"] = points
    if threshold is not None:
        kwargs["antisemitic_threshold"] = threshold
    return ScoreConfig(**kwargs)


@click.group()
def main():
    """Lexicon-driven toxicity scoring with explanations."""


@main.command()
@_lexicon_option
@click.option("--text", "text", default=None, help="Message text to score.")
@click.option("--file", "path", default=None, type=click.Path(),
              help="Read the message text from a file instead.")
@click.option("--format", "fmt", default="json",
              type=click.Choice(["json", "plain", "ansi", "html"]))
@click.option("--points-per-level", type=int, default=None)
@click.option("--threshold", type=int, default=None)
def score(lexicon_path, text, path, fmt, points_per_level, threshold):
    """Score one message and print the result."""
    if (text is None) == (path is None):
        _fail("exactly one of --text or --file is required")
    try:
        lexicon, compiled = _load(lexicon_path)
        if path is not None:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read().rstrip("\n")
        config = _score_overrides(points_per_level, threshold)
        result = score_message(compiled, text, config)
        if fmt == "json":
            record = score_response(Snapshot(lexicon, compiled), text, config)
            click.echo(json.dumps(record, ensure_ascii=False, separators=(",", ":")))
        else:
            style = {"plain": PLAIN, "ansi": ANSI, "html": HTML}[fmt]
            click.echo(render_highlights(text, result, style))
            click.echo(f"toxicity={result.toxicity} antisemitic={result.antisemitic} "
                       f"violent={result.violent}", err=True)
    except (ToxlexError, OSError, ValueError) as exc:
        _fail(str(exc))
    sys.exit(EXIT_FLAGGED if result.antisemitic else EXIT_OK)


@main.command()
@_lexicon_option
@_secret_option
@_config_option
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--adapter", default="generic",
              type=click.Choice(sorted(corpus_mod.ADAPTERS)))
@click.option("--keywords", "keywords_path", default=None, type=click.Path(),
              help="File with one keyword per line for prevalence counting.")
@click.option("--format", "fmt", default="text",
              type=click.Choice(["text", "csv", "json"]))
@click.option("--label", default=None, help="Corpus label for the report.")
@click.option("--points-per-level", type=int, default=None)
@click.option("--threshold", type=int, default=None)
def analyze(lexicon_path, secret_hex, config_path, input_path, adapter,
            keywords_path, fmt, label, points_per_level, threshold):
    """Ingest a message dump, score it, and print an aggregate report."""
    try:
        _, compiled = _load(lexicon_path)
        privacy = _privacy_config(secret_hex, config_path)
        keywords = []
        if keywords_path:
            with open(keywords_path, "r", encoding="utf-8") as fh:
                keywords = [line.strip() for line in fh if line.strip()]
        stats = corpus_mod.IngestStats()
        messages = corpus_mod.ingest(input_path, adapter, privacy, stats=stats)
        report = corpus_mod.analyze(
            messages, compiled,
            config=_score_overrides(points_per_level, threshold),
            keywords=keywords,
            label=label or input_path,
            platform=adapter,
        )
        click.echo(corpus_mod.render_report(report, fmt), nl=False)
        click.echo(f"ingested={stats.emitted} skipped={stats.skipped}", err=True)
    except (ToxlexError, OSError, ValueError) as exc:
        _fail(str(exc))


def _privacy_config(secret_hex: str | None, config_path: str | None = None) -> PrivacyConfig:
    secret_hex = secret_hex or _secret_from_config(config_path)
    if secret_hex:
        return PrivacyConfig.from_hex(secret_hex)
    # Redaction-only work needs no key; a throwaway key keeps pseudonyms
    # consistent within one invocation but not across runs.
    import secrets
    return PrivacyConfig(secrets.token_bytes(16))


@main.command()
@_secret_option
@_config_option
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--adapter", default="text",
              type=click.Choice(["text"] + sorted(corpus_mod.ADAPTERS)))
@click.option("--platform", default=None,
              type=click.Choice(sorted(corpus_mod.PLATFORMS)),
              help="Platform tag for pseudonym domain separation "
                   "(defaults to the adapter).")
def anonymize(secret_hex, config_path, input_path, adapter, platform):
    """Redact a file; with a record adapter, also pseudonymize authors.

    `--adapter text` treats each line as plain message text and prints the
    redacted line; record adapters emit JSON with pseudonymized authors.
    """
    try:
        privacy = _privacy_config(secret_hex, config_path)
        if adapter == "text":
            with open(input_path, "r", encoding="utf-8") as fh:
                for line in fh:
                    click.echo(redact(line.rstrip("\n"), privacy.rules).text)
            return
        stats = corpus_mod.IngestStats()
        for message in corpus_mod.ingest(input_path, platform or adapter, privacy,
                                         stats=stats, adapter=adapter):
            click.echo(json.dumps({
                "id": message.id,
                "platform": message.platform,
                "author": message.author_pseudonym,
                "text": message.text,
                "timestamp": message.timestamp.isoformat() if message.timestamp else None,
            }, ensure_ascii=False))
        click.echo(f"ingested={stats.emitted} skipped={stats.skipped}", err=True)
    except (ToxlexError, OSError, ValueError) as exc:
        _fail(str(exc))


@main.command()
@_lexicon_option
@_secret_option
@_config_option
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--adapter", default="generic",
              type=click.Choice(sorted(corpus_mod.ADAPTERS)))
@click.option("--min-support", type=int, default=5, show_default=True)
@click.option("--top-k", type=int, default=50, show_default=True)
@click.option("--enqueue", is_flag=True,
              help="Write the candidates back into the lexicon file as "
                   "provisional entries.")
def suggest(lexicon_path, secret_hex, config_path, input_path, adapter,
            min_support, top_k, enqueue):
    """Rank new-term candidates from a corpus; print them as CSV."""
    try:
        lexicon, compiled = _load(lexicon_path)
        privacy = _privacy_config(secret_hex, config_path)
        stats = corpus_mod.IngestStats()
        messages = corpus_mod.ingest(input_path, adapter, privacy, stats=stats)
        candidates = suggest_candidates(
            messages, compiled, ExpandConfig(min_support=min_support, top_k=top_k)
        )
        click.echo("term,flagged_count,clean_count,association")
        for c in candidates:
            click.echo(f"{c.term},{c.flagged_count},{c.clean_count},{c.association:.4f}")
        if enqueue:
            updated, summary = enqueue_candidates(candidates, lexicon)
            if summary.changed:
                with open(lexicon_path, "w", encoding="utf-8") as fh:
                    fh.write(serialize_lexicon(updated))
            click.echo(
                f"enqueued={len(summary.added)} skipped={len(summary.skipped)} "
                f"version={updated.version}", err=True,
            )
    except (ToxlexError, OSError, ValueError) as exc:
        _fail(str(exc))


@main.group()
def lexicon():
    """Lexicon file utilities."""


@lexicon.command()
@click.argument("path", type=click.Path())
def validate(path):
    """Parse and compile a lexicon file, reporting what it contains."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lex = parse_lexicon(fh)
        compiled = compile_lexicon(lex)
    except (ToxlexError, OSError) as exc:
        _fail(str(exc))
    by_status: dict[str, int] = {}
    for entry in lex:
        by_status[entry.status] = by_status.get(entry.status, 0) + 1
    click.echo(f"entries={len(lex)} compiled={len(compiled)} "
               f"languages={','.join(sorted(lex.languages))}")
    for status in ("OK", "DISPUTED", "PROVISIONAL"):
        click.echo(f"{status.lower()}={by_status.get(status, 0)}")


@main.command()
@_lexicon_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8300, show_default=True, type=int)
@click.option("--static", "static_dir", default=None, type=click.Path(),
              help="Directory with the curation UI bundle to serve at /.")
@click.option("--persist/--no-persist", default=True, show_default=True,
              help="Write annotation updates back to the lexicon file.")
def serve(lexicon_path, host, port, static_dir, persist):
    """Run the scoring + curation HTTP service."""
    import uvicorn

    try:
        with open(lexicon_path, "r", encoding="utf-8") as fh:
            lex = parse_lexicon(fh)
        state = EngineState(lex, ScoreConfig(),
                            persist_path=lexicon_path if persist else None)
        app = create_app(state, static_dir=static_dir)
    except (ToxlexError, OSError) as exc:
        _fail(str(exc))
    config = ServiceConfig(host=host, port=port, lexicon_path=lexicon_path,
                           static_dir=static_dir)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


if __name__ == "__main__":
    main()
