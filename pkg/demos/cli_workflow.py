#!/usr/bin/env python3
"""End-to-end command-line workflow on a quadruple file.

Writes a non-minimal system to JSON, then drives the four subcommands the
same way a shell script would:

    strongmin structure sys.json --format text
    strongmin reduce    sys.json --output reduced.json
    strongmin scale     sys.json --approach 2 --pow2
    strongmin verify    sys.json
"""
import json
import tempfile
from pathlib import Path

import numpy as np

from strongmin.cli import main
from strongmin.fileio import write_quadruple
from strongmin.gallery import example_rational_system

rng = np.random.default_rng(1)
e5 = list(rng.standard_normal(6))
e5[5] += np.sign(e5[5]) + 0.5
e1 = list(rng.standard_normal(2))
e1[1] += np.sign(e1[1]) + 0.5
q = example_rational_system(e5, e1)

workdir = Path(tempfile.mkdtemp(prefix="strongmin_demo_"))
sys_path = workdir / "sys.json"
write_quadruple(sys_path, q)
print(f"wrote {sys_path} (d={q.d}, m={q.m}, n={q.n})\n")

print("== structure (text report) ==")
main(["structure", str(sys_path), "--format", "text"])

print("\n== reduce ==")
red_path = workdir / "reduced.json"
rc = main(["reduce", str(sys_path), "--output", str(red_path)])
doc = json.loads(red_path.read_text())
print(f"exit {rc}; reduced state dimension: {doc['d']}")

print("\n== scale (approach 2, power-of-2 scalings) ==")
scaled_path = workdir / "scaled.json"
rc = main(["scale", str(sys_path), "--pow2", "--output", str(scaled_path)])
doc = json.loads(scaled_path.read_text())
print(f"exit {rc}; row norms: {np.round(doc['row_norms'], 4)}")

print("\n== verify ==")
rc = main(["verify", str(sys_path)])
print(f"exit {rc}")
