"""Regenerates the benchmark PLA files in this directory.

squar5, Z9sym, Z5xp1 and mlp4 are rebuilt from their definitions. The other
files are seeded random covers with the published input/output widths; they
exercise the same code paths but are not the original functions.
"""
import random
from pathlib import Path

HERE = Path(__file__).parent


def dense(name, n, m, f, note):
    rows = [f"{x:0{n}b} {f(x):0{m}b}" for x in range(1 << n)]
    write(name, n, m, rows, note, "fd")


def write(name, n, m, rows, note, kind):
    text = [f"# {note}", f".i {n}", f".o {m}", f".type {kind}", f".p {len(rows)}", *rows, ".e", ""]
    (HERE / f"{name}.pla").write_text("\n".join(text))


def stand_in(name, n, m, cubes, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(cubes):
        inputs = "".join(rng.choice("01-") if rng.random() < 0.9 else "-" for _ in range(n))
        outputs = ["1" if rng.random() < 0.3 else "0" for _ in range(m)]
        if "1" not in outputs:
            outputs[rng.randrange(m)] = "1"
        rows.append(f"{inputs} {''.join(outputs)}")
    write(name, n, m, rows, f"stand-in: seeded random cover (seed {seed}) with the widths of {name}", "fd")


dense("squar5", 5, 8, lambda x: (x * x) & 0xFF, "low eight bits of x^2")
dense("Z9sym", 9, 1, lambda x: int(3 <= bin(x).count("1") <= 6), "1 when three to six inputs are set")
dense("Z5xp1", 7, 10, lambda x: 5 * x + 1, "5x + 1")
dense("mlp4", 8, 8, lambda x: (x >> 4) * (x & 15), "product of two 4-bit operands")

for i, (name, n, m, cubes) in enumerate([
    ("inc", 7, 9, 30),
    ("dist", 8, 5, 120),
    ("f51m", 8, 8, 80),
    ("clip", 9, 5, 120),
    ("addm4", 9, 8, 200),
    ("b11", 8, 31, 70),
    ("apex4", 9, 19, 430),
    ("ex5", 8, 63, 75),
]):
    stand_in(name, n, m, cubes, 1000 + i)
