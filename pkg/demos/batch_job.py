"""
Running a batch job from a JSON description
===========================================

The command-line front end reads a JSON job, runs it and prints a JSON
report. The same thing can be driven from Python, which is what this
script does for a pressure sweep.
"""

import json
import math
import tempfile
from pathlib import Path

from gibbsolver.cli import main

job = {
    "system": {"type": "full_shift", "n": 2},
    "potential": {"type": "table", "depth": 2,
                  "values": {"00": -math.log(3), "01": math.log(4 / 3),
                             "10": -math.log(3), "11": -math.log(3)}},
    "command": {"type": "sweep", "beta_from": -3, "beta_to": 1, "steps": 9},
}

###############################################################################
# Equivalent shell call: ``gibbsolver run job.json --csv sweep.csv``.

with tempfile.TemporaryDirectory() as tmp:
    config = Path(tmp) / "job.json"
    config.write_text(json.dumps(job))
    out = Path(tmp) / "sweep.csv"
    code = main(["run", str(config), "--csv", str(out)])
    print("exit code", code)
    print(out.read_text())
