# %% [markdown]
# # Documents and the command line
#
# Representations are stored as JSON documents (format_version 1). The
# `saddlerep` command reads them; `-` means stdin so stages can be piped.

# %%
import subprocess
import sys
import tempfile
from pathlib import Path

from saddlerep import DCPair, Document, MaxOfLinear, parse, serialize

doc = Document("dc", DCPair(MaxOfLinear([[1.0], [-1.0]]), MaxOfLinear([[0.0]])), name="abs")
text = serialize(doc)
print(text)
assert parse(text) == doc

# %%
tmp = Path(tempfile.mkdtemp())
(tmp / "abs.json").write_text(text)


def cli(*args, stdin=None):
    res = subprocess.run(
        [sys.executable, "-m", "saddlerep", *args], input=stdin, capture_output=True, text=True
    )
    return res.returncode, res.stdout


code, saddle_doc = cli("build-saddle", str(tmp / "abs.json"))
print(saddle_doc)
code, report = cli("verify", "-", stdin=saddle_doc)
print(report, "exit", code)

# %%
for cmd in (["info"], ["sign"], ["eval", "--at", "-2"], ["descent"]):
    code, out = cli(*cmd, str(tmp / "abs.json"))
    print("$ saddlerep", " ".join(cmd), f"-> exit {code}\n{out}")
