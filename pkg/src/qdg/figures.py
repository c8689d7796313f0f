"""Hand translations of the worked figures, and loaders for their JSON fixtures.

Wire and transistor ids below follow the pictures; the fixture files hold the
canonical serialization of the same diagrams (see fixtures/README.md).
"""

from __future__ import annotations

import json
from importlib import resources

from .diagram import Diagram, Transistor, check, concatenate, dumps, loads
from .presentation import QV_BASE, V_BASE
from .qv import TreePair

FIXTURES = (
    "figure1_delta1",
    "figure1_delta2",
    "figure1_concat",
    "figure1_reduced",
    "figure2_psi",
    "figure3_treepair",
    "figure4",
)


def figure1_delta1() -> Diagram:
    """(x, x^4) over <x | x = x^2>.

    A splits the frame wire into the inputs of B (left) and C (right).  B's
    outputs go straight down; C's outputs cross, so the frame bottom reads
    b0 b1 c1 c0.
    """
    wires = {0: "x", 1: "x", 2: "x", 3: "x", 4: "x", 5: "x", 6: "x"}
    # 0: frame -> A; 1: A -> B; 2: A -> C; 3, 4: B outputs; 5, 6: C outputs
    ts = (
        Transistor(0, (0,), (1, 2)),  # A
        Transistor(1, (1,), (3, 4)),  # B
        Transistor(2, (2,), (5, 6)),  # C
    )
    return check(Diagram(V_BASE, wires, ts, (0,), (3, 4, 6, 5)))


def figure1_delta2() -> Diagram:
    """(x^4, x): E merges contacts 1, 2; F merges 3, 4; D merges E and F."""
    wires = {i: "x" for i in range(7)}
    ts = (
        Transistor(0, (0, 1), (4,)),  # E
        Transistor(1, (2, 3), (5,)),  # F
        Transistor(2, (4, 5), (6,)),  # D
    )
    return check(Diagram(V_BASE, wires, ts, (0, 1, 2, 3), (6,)))


def figure1_reduced() -> Diagram:
    """r(Delta1 o Delta2): B and E cancel; A's left wire runs to D, C and F stay crossed."""
    wires = {i: "x" for i in range(7)}
    # 0: frame -> A; 1: A -> D; 2: A -> C; 3, 4: C outputs; 5: F -> D; 6: D -> frame
    ts = (
        Transistor(0, (0,), (1, 2)),  # A
        Transistor(1, (2,), (3, 4)),  # C
        Transistor(2, (4, 3), (5,)),  # F, fed crosswise
        Transistor(3, (1, 5), (6,)),  # D
    )
    return check(Diagram(V_BASE, wires, ts, (0,), (6,)))


def figure2_psi() -> Diagram:
    """Thin (x^4, x^2): transistor 1 merges contacts 1, 2; transistor 2 merges 3, 4."""
    wires = {i: "x" for i in range(6)}
    ts = (Transistor(1, (0, 1), (4,)), Transistor(2, (2, 3), (5,)))
    return check(Diagram(V_BASE, wires, ts, (0, 1, 2, 3), (4, 5)))


def figure3_treepair() -> TreePair:
    """Leaves 0, 10, 11 go to 01, 00, 1; interior nodes e -> 0 and 1 -> e."""
    return TreePair.from_maps({"0": "01", "10": "00", "11": "1"}, {"": "0", "1": ""})


def figure4() -> Diagram:
    """(x, x) over <x, a | x = xax> with two positive and two negative transistors.

    Top to bottom: A splits the frame wire into w5 x, w2 a, w1 x; B splits w5
    into w4 x, w7 a, w6 x; C merges w4, w2, w1 into w3; D merges w6, w7, w3
    into the bottom frame wire w8.
    """
    wires = {0: "x", 1: "x", 2: "a", 3: "x", 4: "x", 5: "x", 6: "x", 7: "a", 8: "x"}
    ts = (
        Transistor(0, (0,), (5, 2, 1)),  # A (positive)
        Transistor(1, (5,), (4, 7, 6)),  # B (positive)
        Transistor(2, (4, 2, 1), (3,)),  # C (negative)
        Transistor(3, (6, 7, 3), (8,)),  # D (negative)
    )
    return check(Diagram(QV_BASE, wires, ts, (0,), (8,)))


def build(name: str):
    if name == "figure1_concat":
        return concatenate(figure1_delta1(), figure1_delta2())
    return globals()[name]()


def fixture_text(name: str) -> str:
    """Canonical serialization, as stored in the fixture files."""
    obj = build(name)
    if isinstance(obj, TreePair):
        return json.dumps(obj.to_json(), sort_keys=True, indent=1) + "\n"
    return dumps(obj)


def fixture_path(name: str):
    return resources.files("qdg") / "fixtures" / f"{name}.json"


def load_fixture(name: str):
    text = fixture_path(name).read_text(encoding="utf-8")
    if name == "figure3_treepair":
        return TreePair.from_json(json.loads(text))
    return loads(text)
