"""
Driving the command line from Python
====================================

The ``stoqdyn`` console script reads the JSON files under ``demos/data``.  The
same entry point is callable in-process; ``--no-timing`` makes reports
byte-for-byte reproducible.
"""

from pathlib import Path

from stoqdyn.cli import main

data = Path(__file__).parent / "data"

main(["analyze", str(data / "nondivisible.json"), "--table", "--no-timing"])
main(["check", str(data / "coin_measure.json"), "--table", "--no-timing"])
main(["implement", "--non-markov", str(data / "nondivisible.json"), "--p0", "1/2,1/2", "--table", "--no-timing"])
main(["reproduce", "--all", "--table"])
