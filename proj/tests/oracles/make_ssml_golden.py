"""Generates the SSML golden corpus: tests/golden/ssml_cases.json plus one
NN.ssml file per case holding the exact expected bytes (no trailing newline).
"""
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "..", "golden")

CASES = [
    ("Hello", "medium", "medium", 1.0),
    ("Tom & Jerry", "high", "loud", 1.5),
    ("I am sure there will be some in the area.", "medium", "medium", 1.0),
    ("Yes, it does.", "x-high", "x-loud", 2.0),
    ("No, I don't sorry.", "x-low", "x-soft", 0.5),
    ("5 < 6 and 7 > 3", "low", "soft", 0.75),
    ("She said \"hi\"", "high", "medium", 1.25),
    ("It's Bob's turn", "medium", "loud", 1.1),
    ("<speak>", "medium", "medium", 1.0),
    ("a&b&c", "low", "x-soft", 0.9),
    ("What do you think?", "x-low", "medium", 1.333),
    ("Rate rounds up", "medium", "medium", 1.005),
    ("Rate rounds down", "medium", "medium", 1.004),
    ("Café au lait", "high", "soft", 0.66),
    ("Multiple   spaces  kept", "medium", "x-loud", 1.99),
    ("Tabs\tand\nnewlines", "x-high", "medium", 0.51),
    ("&amp; already escaped", "medium", "medium", 1.0),
    ("Quote ' and apostrophe '", "low", "loud", 1.6),
    ("Fish & chips <tonight>?", "x-high", "x-soft", 1.42),
    ("The West End has amazing shows every night. Do you enjoy musicals or plays more?", "high", "loud", 1.2),
]


def escape(text):
    out = []
    for ch in text:
        out.append({"&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;", "'": "&apos;"}.get(ch, ch))
    return "".join(out)


def render(text, pitch, volume, rate):
    return ('<speak><prosody pitch="%s" volume="%s" rate="%.2f">%s</prosody></speak>'
            % (pitch, volume, rate, escape(text)))


def main():
    assert len(CASES) == 20
    os.makedirs(os.path.join(GOLDEN, "ssml"), exist_ok=True)
    cases = []
    for i, (text, pitch, volume, rate) in enumerate(CASES):
        name = "%02d.ssml" % i
        with open(os.path.join(GOLDEN, "ssml", name), "wb") as f:
            f.write(render(text, pitch, volume, rate).encode("utf-8"))
        cases.append({"file": name, "text": text, "pitch": pitch, "volume": volume, "rate": rate})
    with open(os.path.join(GOLDEN, "ssml_cases.json"), "w", encoding="utf-8") as f:
        json.dump(cases, f, indent=1, ensure_ascii=False)
        f.write("\n")


if __name__ == "__main__":
    main()
