"""Compile the three bundled case studies without any LLM and report what was drawn.

    python3 scripts/compile_examples.py --out drawings/
"""

from pathlib import Path

import click

from strucdraw.emit import counts, emit_dxf, emit_script, ir_to_entities
from strucdraw.ir import serialize_ir
from strucdraw.knowledge import load, retrieve
from strucdraw.pipeline.evaluate import bundled_corpus


@click.command()
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("drawings"), show_default=True)
def main(out):
    kb = load()
    for case in bundled_corpus():
        ir = case.expected_ir()
        ents = ir_to_entities(ir)
        target = out / case.name
        target.mkdir(parents=True, exist_ok=True)
        (target / "ir.json").write_text(serialize_ir(ir))
        (target / "drawing.dxf").write_bytes(emit_dxf(ents, ir.unit))
        (target / "script.py.txt").write_text(emit_script(ir, retrieve(kb, ir.kind).codegen_steps))
        drawn = ", ".join(f"{n} {k.lower()}s" for k, n in sorted(counts(ents).items()) if n)
        click.echo(f"{case.name}: {drawn} -> {target}")


if __name__ == "__main__":
    main()
