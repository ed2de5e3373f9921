"""Named example models used throughout the tests and the CLI docs."""

from .models import FOEpistemicModel, KripkeModel, LtsModel

# s:p -> t:p, and the single point s':p.  Same NCL theory, not bisimilar.
MODEL_A = KripkeModel(["s", "t"], {"i": [("s", "t")]}, {"p": ["s", "t"]})
MODEL_B = KripkeModel(["s'"], {"i": []}, {"p": ["s'"]})

# Two p-worlds that agent 1 cannot tell apart but that disagree on $c.
# Agent 2 only has the reflexive loops.
MODEL_KV = FOEpistemicModel(
    KripkeModel(
        ["w1", "w2"],
        {"1": [("w1", "w1"), ("w1", "w2"), ("w2", "w1"), ("w2", "w2")],
         "2": [("w1", "w1"), ("w2", "w2")]},
        {"p": ["w1", "w2"]},
    ),
    {"c": {"w1": "0", "w2": "1"}},
    ("0", "1"),
)

# Non-deterministic a at s1: ab is not strongly executable.
MODEL_KH1 = LtsModel(
    ["s1", "s2", "s3", "s4"], ["a", "b"],
    {"a": [("s1", "s2"), ("s1", "s3")], "b": [("s2", "s4")]},
    {"p": ["s1"], "q": ["s4"]},
)

# ab works from s1 and ba from s2, but no single plan works from both.
MODEL_KH2 = LtsModel(
    ["s1", "s2", "s3", "s4", "s5", "s6"], ["a", "b"],
    {"a": [("s1", "s3"), ("s4", "s6")], "b": [("s3", "s5"), ("s2", "s4")]},
    {"p": ["s1", "s2"], "r": ["s1"], "q": ["s5", "s6"]},
)

# r-chain with u side exits; ru reaches q from both p-states.
MODEL_KH3 = LtsModel(
    ["s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8"], ["r", "u"],
    {"r": [("s1", "s2"), ("s2", "s3"), ("s3", "s4"), ("s4", "s5")],
     "u": [("s2", "s6"), ("s3", "s7"), ("s4", "s8")]},
    {"p": ["s2", "s3"], "q": ["s4", "s7", "s8"]},
)

FRAME_F1 = KripkeModel(["s1", "t", "u"], {"i": [("s1", "t"), ("t", "u")]})
FRAME_F2 = KripkeModel(["s2"], {"i": [("s2", "s2")]})

FIXTURES = {
    "MODEL_A": MODEL_A,
    "MODEL_B": MODEL_B,
    "MODEL_KV": MODEL_KV,
    "MODEL_KH1": MODEL_KH1,
    "MODEL_KH2": MODEL_KH2,
    "MODEL_KH3": MODEL_KH3,
    "FRAME_F1": FRAME_F1,
    "FRAME_F2": FRAME_F2,
}
