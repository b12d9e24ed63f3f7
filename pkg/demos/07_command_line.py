"""
The command-line interface
==========================

``steinhaus decompose`` writes JSON, CSV or SVG; ``verify`` re-checks a file;
``witness`` finds an uncovered point; ``plot`` draws lanes of translates.
"""

import json
import tempfile
from pathlib import Path

from steinhaus.cli import main

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp)
    main(["decompose", "--epsilon", "1/20", "--interval", "[0,1)", "--steps", "20", "--out", str(out / "d.json")])
    print("translates written:", len(json.loads((out / "d.json").read_text())["translates"]))
    code = main(["verify", str(out / "d.json"), "--points", "20", "--basis-prefix", "15", "--out", str(out / "r.json")])
    print("verify exit code:", code)
    main(["plot", str(out / "d.json"), "--out", str(out / "d.svg")])
    print("svg bytes:", len((out / "d.svg").read_bytes()))
    main(["decompose", "--interval", "[0,1)", "--steps", "3", "--format", "csv"])
