"""Accuracy tables for the bundled corpus: perfect replay and a seeded fault schedule.

    python3 scripts/run_eval.py --trials 100 --seed 0 --out results/
"""

from pathlib import Path

import click

from strucdraw.knowledge import load
from strucdraw.pipeline import FaultProvider, ReplayProvider, load_templates, parse_schedule
from strucdraw.pipeline.evaluate import bundled_corpus, evaluate

RC_ROW = "1=0.98,2=1.0,3-1=0.85,3-2=0.77,3-3=0.81,4=1.0,5=0.95,6=0.83"


@click.command()
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--schedule", default=RC_ROW, show_default=True, help="Per-step success rates to inject.")
@click.option("--jobs", type=int, default=4, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("results"), show_default=True)
def main(trials, seed, schedule, jobs, out):
    kb, templates, cases = load(), load_templates(), bundled_corpus()
    replay = ReplayProvider.bundled()
    out.mkdir(parents=True, exist_ok=True)
    runs = {
        "replay": replay,
        "fault": FaultProvider(replay, parse_schedule(schedule), trials, seed=seed),
    }
    for name, provider in runs.items():
        table = evaluate(cases, trials, provider, kb, templates=templates, jobs=jobs)
        click.echo(f"[{name}] {trials} trials per drawing")
        click.echo(table.format() + "\n")
        (out / f"accuracy_{name}.csv").write_text(table.to_csv())


if __name__ == "__main__":
    main()
