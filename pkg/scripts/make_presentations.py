#!/usr/bin/env python3
"""Write every preset presentation to data/ as canonical JSON."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from ordlat.presets import PRESETS, load
from ordlat.serialize import dumps, presentation_to_json

out_dir = pathlib.Path(__file__).resolve().parent.parent / "data"
out_dir.mkdir(exist_ok=True)

for name in sorted(PRESETS):
    pres = load(name)
    path = out_dir / f"{name}.json"
    path.write_text(dumps(presentation_to_json(pres)) + "\n")
    print(f"wrote {path} ({len(pres.generators)} generators)")
