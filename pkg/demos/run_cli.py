"""
Driving the command line tool from Python.

Every config in demos/configs is pushed through `coeffs` and `verify`; the
exit code tells whether the hypotheses held and whether every check passed.
"""
import subprocess
import sys
from pathlib import Path

here = Path(__file__).resolve().parent
for config in sorted((here / "configs").glob("*.json")):
    for command in ("coeffs", "verify"):
        proc = subprocess.run([sys.executable, "-m", "pointcontact", command,
                               "--config", str(config)], capture_output=True, text=True)
        first = (proc.stdout or proc.stderr).strip().splitlines()[:1]
        print(f"{config.name:22} {command:7} exit={proc.returncode}  {first[0] if first else ''}")
