"""Reading and writing the on-disk formats, and driving the command line.

Networks use the DIMACS max-flow format. Flows are bound to their network
by name and edge count. A sample collection is a directory holding the
network plus one capacity file per sample.
"""

import tempfile
from pathlib import Path

from predflow import FlowNetwork, ParseError
from predflow.cli import main
from predflow.formats import parse_network, serialize_flow, serialize_network, write_sample_dir

diamond = FlowNetwork(4, ((0, 1), (0, 2), (1, 3), (2, 3), (1, 2)), 0, 3, (2, 2, 2, 2, 1))
text = serialize_network(diamond)
print(text)
assert parse_network(text) == diamond

# malformed input names the offending line
try:
    parse_network("p max 2 1\nn 1 s\nn 2 t\na 1 2 -4\n")
except ParseError as exc:
    print("rejected:", exc)

work = Path(tempfile.mkdtemp())
(work / "diamond.max").write_text(text)
(work / "guess.flow").write_text(serialize_flow((2, 1, 1, 2, 1), diamond, "diamond"))
print()
print(serialize_flow((2, 1, 1, 2, 1), diamond, "diamond"))

print("$ predflow warm-solve diamond.max guess.flow")
main(["warm-solve", str(work / "diamond.max"), str(work / "guess.flow")])

samples = work / "samples"
write_sample_dir(samples, diamond, [(2, 2, 2, 2, 1), (1, 2, 2, 1, 0), (2, 1, 1, 2, 1)])
print("$ predflow learn samples --name diamond")
main(["learn", str(samples), "--name", "diamond"])

print("$ predflow sample-count --c-max 3 --edges 5")
main(["sample-count", "--c-max", "3", "--edges", "5"])
