"""Frame-energy thresholding oracle for the tone/silence/tone VAD case.

Builds the signal sample by sample, computes short-time RMS on a 30 ms / 10 ms
grid, thresholds, bridges gaps below the hangover and drops short runs.
Prints segment boundaries in samples and seconds.
"""
import math

RATE = 16000
FREQ = 220.0
AMP = 0.5
FRAME = 480
HOP = 160
THRESHOLD = 0.05
HANGOVER = 1600  # 100 ms
MIN_LEN = 1600   # 100 ms


def signal():
    tone = int(0.3 * RATE)
    gap = int(0.5 * RATE)
    n_total = tone + gap + tone
    xs = []
    for n in range(n_total):
        voiced = n < tone or n >= tone + gap
        xs.append(AMP * math.sin(2 * math.pi * FREQ * n / RATE) if voiced else 0.0)
    return xs


def main():
    xs = signal()
    n = len(xs)
    frames = []
    start = 0
    while True:
        end = min(start + FRAME, n)
        chunk = xs[start:end]
        frames.append((start, end, math.sqrt(sum(v * v for v in chunk) / len(chunk))))
        if end >= n:
            break
        start += HOP
    active = [(s, e) for s, e, r in frames if r > THRESHOLD]
    runs = []
    for s, e in active:
        if runs and s <= runs[-1][1]:
            runs[-1][1] = max(runs[-1][1], e)
        else:
            runs.append([s, e])
    merged = []
    for s, e in runs:
        if merged and s - merged[-1][1] < HANGOVER:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    segs = [(s, e) for s, e in merged if e - s >= MIN_LEN]
    print("frames", len(frames))
    for s, e in segs:
        print(f"segment samples [{s}, {e}) seconds [{s / RATE:.6f}, {e / RATE:.6f})")


if __name__ == "__main__":
    main()
