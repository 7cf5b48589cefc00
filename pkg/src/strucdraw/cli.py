"""Command-line entry points: compile, agent, verify, eval."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from .emit import TemplateLibrary, emit_dxf, emit_script, ir_to_entities
from .frontend import FrontendError, fields_to_spec, infer_kind, parse_fields, parse_other_info
from .geometry import GeometryError, PrecastCatalog, RcSectionSpec, default_catalog, resolve, verify_ir
from .ir import DrawingIR, DrawingKind, IRError, parse_ir, serialize_ir
from .knowledge import KnowledgeBase, KnowledgeError, load, retrieve
from .pipeline import (
    FaultProvider,
    HttpProvider,
    ProviderConfig,
    ProviderConfigError,
    ReplayProvider,
    load_templates,
    parse_schedule,
    run_pipeline,
)
from .pipeline.evaluate import bundled_corpus, evaluate, load_corpus


@dataclass(frozen=True)
class CliConfig:
    kb: Path | None = None
    templates: Path | None = None
    prompts: Path | None = None
    catalog: Path | None = None
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    out_dir: Path = Path(".")
    tolerance: float = 1e-3
    trials: int = 100

    def __post_init__(self):
        if not self.tolerance > 0:
            raise click.BadParameter("tolerance must be positive", param_hint="--tolerance")
        if self.trials < 1:
            raise click.BadParameter("trials must be at least 1", param_hint="--trials")

    def knowledge(self) -> KnowledgeBase:
        return load(self.kb)

    def library(self) -> TemplateLibrary:
        return TemplateLibrary.open(self.templates) if self.templates else TemplateLibrary.bundled()

    def catalog_(self) -> PrecastCatalog:
        return PrecastCatalog.load(self.catalog) if self.catalog else default_catalog()


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _write(out_dir: Path, name: str, data: str | bytes) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data, encoding="utf-8")
    return path


def _artifacts(cfg: CliConfig, ir: DrawingIR, kb: KnowledgeBase, emit: tuple[str, ...], script: str | None = None) -> list[Path]:
    written = []
    if "ir" in emit:
        written.append(_write(cfg.out_dir, "ir.json", serialize_ir(ir)))
    if "dxf" in emit:
        entities = ir_to_entities(ir, cfg.library(), cfg.catalog_())
        written.append(_write(cfg.out_dir, "drawing.dxf", emit_dxf(entities, ir.unit)))
    if "script" in emit:
        if script is None:
            script = emit_script(ir, retrieve(kb, ir.kind).codegen_steps, cfg.catalog_())
        written.append(_write(cfg.out_dir, "script.py.txt", script))
    return written


def _has_unit_line(text: str) -> bool:
    return any(line.strip().lstrip("-*•").strip().casefold().startswith("unit:") for line in text.splitlines())


def _make_provider(spec: str, cfg: CliConfig, replay_dir: Path | None, seed: int):
    def replay():
        return ReplayProvider.from_path(replay_dir) if replay_dir else ReplayProvider.bundled()

    name, _, arg = spec.partition(":")
    if name == "live":
        return HttpProvider(cfg.provider)
    if name == "replay":
        return ReplayProvider.from_path(arg) if arg else replay()
    if name == "fault":
        if not arg:
            raise click.BadParameter("fault needs a schedule, e.g. fault:1=0.98,6=0.83", param_hint="--provider")
        try:
            schedule = parse_schedule(arg)
        except (ValueError, ProviderConfigError) as exc:
            raise click.BadParameter(str(exc), param_hint="--provider") from None
        return FaultProvider(replay(), schedule, cfg.trials, seed=seed)
    raise click.BadParameter(f"unknown provider {spec!r}", param_hint="--provider")


def _common(f):
    options = [
        click.option("--kb", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Knowledge file (JSON)."),
        click.option("--templates", type=click.Path(exists=True, file_okay=False, path_type=Path), help="DXF template library."),
        click.option("--prompts", type=click.Path(exists=True, file_okay=False, path_type=Path), help="Prompt template directory."),
        click.option("--catalog", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Precast catalog (JSON)."),
        click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), default=Path("."), show_default=True),
        click.option("--tolerance", type=float, default=1e-3, show_default=True),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def _provider_options(f):
    options = [
        click.option("--provider", "provider_spec", default="replay", show_default=True,
                     help="live, replay[:<dir>] or fault:<schedule>."),
        click.option("--replay-dir", type=click.Path(exists=True, path_type=Path),
                     help="Transcripts for replay and fault providers."),
        click.option("--seed", type=int, default=0, show_default=True, help="Fault-injection seed."),
        click.option("--model-light", help="Model for steps 1, 2 and 4."),
        click.option("--model-strong", help="Model for steps 3, 5 and 6."),
        click.option("--api-key-env", default="OPENAI_API_KEY", show_default=True),
        click.option("--base-url", default="https://api.openai.com/v1", show_default=True),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def _config(kw: dict, trials: int = 100) -> CliConfig:
    provider = ProviderConfig(
        model_light=kw.get("model_light"),
        model_strong=kw.get("model_strong"),
        api_key_env=kw.get("api_key_env") or "OPENAI_API_KEY",
        base_url=kw.get("base_url") or "https://api.openai.com/v1",
    )
    return CliConfig(kw.get("kb"), kw.get("templates"), kw.get("prompts"), kw.get("catalog"),
                     provider, kw["out_dir"], kw["tolerance"], trials)


@click.group()
@click.version_option(package_name="strucdraw")
def main():
    """Generate beam cross-section drawings."""


@main.command("compile")
@click.argument("description", type=click.File("r", encoding="utf-8"))
@click.option("--kind", type=click.Choice([k.value for k in DrawingKind]), help="Override the kind named in the fields.")
@click.option("--emit", "emit", multiple=True, type=click.Choice(["ir", "dxf", "script"]),
              help="Artifacts to write (default: all).")
@_common
def compile_cmd(description, kind, emit, **kw):
    """Build a drawing from bullet-form fields without any LLM."""
    cfg = _config(kw)
    text = description.read()
    try:
        fields = parse_fields(text)
        drawing_kind = DrawingKind(kind) if kind else infer_kind(fields, cfg.catalog_())
        if drawing_kind is None:
            _fail("cannot tell the drawing kind; add a 'Type of Structure' field or pass --kind")
        catalog = cfg.catalog_()
        spec = fields_to_spec(fields, drawing_kind, catalog)
        other = parse_other_info(text)
        unit = other.unit
        if isinstance(spec, RcSectionSpec) and not _has_unit_line(text):
            unit = None
        ir = resolve(spec, unit=unit, save=other.save, catalog=catalog)
        kb = cfg.knowledge()
        for path in _artifacts(cfg, ir, kb, emit or ("ir", "dxf", "script")):
            click.echo(f"wrote {path}")
    except (FrontendError, GeometryError, KnowledgeError, IRError, LookupError, ValueError) as exc:
        _fail(f"{type(exc).__name__}: {exc}")


@main.command("agent")
@click.argument("description", type=click.File("r", encoding="utf-8"))
@_common
@_provider_options
def agent_cmd(description, provider_spec, replay_dir, seed, **kw):
    """Run the six-step chain on a free-text description."""
    cfg = _config(kw)
    text = description.read().strip()
    try:
        kb = cfg.knowledge()
        templates = load_templates(cfg.prompts)
        provider = _make_provider(provider_spec, cfg, replay_dir, seed)
        run = run_pipeline(text, cfg.provider, provider, kb, templates=templates,
                           catalog=cfg.catalog_(), tolerance=cfg.tolerance)
    except (ProviderConfigError, KnowledgeError, ValueError) as exc:
        _fail(f"{type(exc).__name__}: {exc}", 2)
    click.echo(f"wrote {_write(cfg.out_dir, 'run.json', run.dumps())}")
    for t in run.transcripts:
        click.echo(f"step {t.tag}: {t.outcome}" + (f" ({t.error})" if t.error else ""))
    if run.ir is not None and run.script is not None:
        try:
            for path in _artifacts(cfg, run.ir, kb, ("ir", "dxf", "script"), script=run.script):
                click.echo(f"wrote {path}")
        except (GeometryError, LookupError, ValueError) as exc:
            _fail(f"cannot draw the IR: {exc}", 2)
    if not run.completed:
        _fail(run.error or "pipeline stopped before step 6", 2)
    if run.verify is None:
        click.echo("verify: skipped (no spec recoverable from step 2)")
    else:
        click.echo(f"verify: {len(run.verify)} mismatch(es)")
        for m in run.verify:
            click.echo(f"  {m}")
        if not run.verify.ok:
            sys.exit(1)


@main.command("verify")
@click.argument("ir_file", type=click.File("r", encoding="utf-8"))
@click.argument("description", type=click.File("r", encoding="utf-8"))
@_common
def verify_cmd(ir_file, description, **kw):
    """Compare an IR file with the drawing its bullet-form fields describe."""
    cfg = _config(kw)
    try:
        ir = parse_ir(ir_file.read())
        catalog = cfg.catalog_()
        spec = fields_to_spec(parse_fields(description.read()), ir.kind, catalog)
        report = verify_ir(ir, spec, cfg.tolerance, catalog=catalog)
    except (IRError, FrontendError, GeometryError) as exc:
        _fail(f"{type(exc).__name__}: {exc}")
    click.echo(json.dumps(report.to_json(), indent=2))
    if not report.ok:
        sys.exit(1)


@main.command("eval")
@click.argument("corpus_dir", required=False, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@_common
@_provider_options
def eval_cmd(corpus_dir, trials, jobs, provider_spec, replay_dir, seed, **kw):
    """Per-step accuracy of the chain over a corpus (bundled cases by default)."""
    cfg = _config(kw, trials)
    try:
        catalog = cfg.catalog_()
        cases = load_corpus(corpus_dir, catalog) if corpus_dir else bundled_corpus()
        provider = _make_provider(provider_spec, cfg, replay_dir, seed)
        table = evaluate(cases, cfg.trials, provider, cfg.knowledge(), config=cfg.provider,
                         templates=load_templates(cfg.prompts), catalog=catalog,
                         tolerance=cfg.tolerance, jobs=jobs)
    except (ProviderConfigError, KnowledgeError, FrontendError, OSError, ValueError) as exc:
        _fail(f"{type(exc).__name__}: {exc}")
    click.echo(table.format())
    click.echo(f"wrote {_write(cfg.out_dir, 'accuracy.csv', table.to_csv())}")


if __name__ == "__main__":
    main()
