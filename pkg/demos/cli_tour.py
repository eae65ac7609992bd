"""
Driving the command line end to end
===================================

The same capabilities are exposed as a CLI.  This script writes a config
file, runs `simulate`, re-aggregates the stored trials with `compare`, and
dumps a prediction table with `theory`, all through the console entry
point, then shows the files it produced.
"""

import pathlib
import tempfile

from vacantwalk import cli

CONFIG = """\
model.type = regular
model.n = 20000
model.r = 3
walk.times = 0.5*tstar, 1.0*tstar, 1.3*tstar
run.trials = 3
run.seed = 31
"""

tmp = pathlib.Path(tempfile.mkdtemp(prefix="vacantwalk-demo-"))
(tmp / "run.ini").write_text(CONFIG)

print("$ vacantwalk simulate --config run.ini --out", tmp / "out")
cli.main(["simulate", "--config", str(tmp / "run.ini"), "--out", str(tmp / "out")])

print("\n$ vacantwalk compare --manifest out/manifest.json --out redo.csv")
cli.main(["compare", "--manifest", str(tmp / "out" / "manifest.json"),
          "--out", str(tmp / "redo.csv")])
same = (tmp / "redo.csv").read_bytes() == (tmp / "out" / "report.csv").read_bytes()
print("re-aggregated report identical:", same)

print("\n$ vacantwalk theory --model regular --n 20000 --grid 8 --out -")
cli.main(["theory", "--model", "regular", "--n", "20000", "--grid", "8", "--out", "-"])

print("\nfiles under", tmp)
for p in sorted(tmp.rglob("*")):
    if p.is_file():
        print(" ", p.relative_to(tmp))
