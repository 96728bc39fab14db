"""Smoke test for the `sterilize` extension module.

Build and install it first:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/sterilize-*.whl

then run `python python/smoke_test.py`.
"""

import math
import pathlib
import sys
import tempfile

import sterilize

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "crates" / "core" / "tests" / "data" / "corpus"


def check(cond, what):
    if not cond:
        sys.exit(f"FAIL: {what}")
    print(f"ok   {what}")


def main():
    # codec round trip on a small color image
    img = sterilize.Image(3, 2, [list(range(0, 6)), list(range(10, 16)), list(range(250, 256))])
    data = img.to_bmp()
    check(data[:2] == b"BM" and len(data) == 54 + 2 * 12, "24-bit BMP layout")
    check(sterilize.parse_bmp(data) == img, "BMP round trip")
    try:
        sterilize.parse_bmp(data[:13])
        check(False, "truncated BMP rejected")
    except ValueError:
        check(True, "truncated BMP rejected")

    # each algorithm recovers its message
    cover = sterilize.Image.gray(8, 8, bytes((7 * i) % 256 for i in range(64)))
    msg = sterilize.text_to_bits(b"Hi!")
    for algo, key in (("A", {}), ("B", {}), ("C", {"seed": 2011, "segments": 4})):
        stego, trace = sterilize.embed(cover, algo, msg, **key)
        back = sterilize.extract(stego, algo, len(msg), **key)
        check(sterilize.bits_to_text(back) == b"Hi!", f"algorithm {algo} round trip")
        check(len(trace) >= len(msg), f"algorithm {algo} trace length")

    # sterilizer example: both buckets take the majority parity
    check(sterilize.sterilize_channel(bytes([4, 5, 5, 7, 6]), 5) == bytes([5, 5, 5, 7, 7]), "sterilize_channel fixture")

    # accuracy fixtures
    c = sterilize.Image.gray(4, 1, bytes([2, 2, 2, 2]))
    s = sterilize.Image.gray(4, 1, bytes([3, 2, 2, 2]))
    _, overall = sterilize.accuracy(c, s, sterilize.sterilize(s), [(0, 0)])
    check(overall == (1, 1, 1, 1.0), "accuracy 1.0 fixture")
    _, overall = sterilize.accuracy(c, c, sterilize.sterilize(c), [(0, 0)])
    check(overall[3] is None, "undefined accuracy fixture")

    # metrics
    check(math.isinf(sterilize.psnr(cover, cover)), "identical images give infinite PSNR")
    stego, _ = sterilize.embed(cover, "A", [1] * 64)
    per_channel, combined = sterilize.mse(stego, sterilize.sterilize(stego))
    check(len(per_channel) == 1 and 0.0 <= combined <= 1.0, "MSE after sterilization")
    check(sum(sterilize.histogram(cover.plane(0))) == 64, "histogram total")

    # corpus experiment matches the checked-in golden report
    with tempfile.TemporaryDirectory() as tmp:
        report = sterilize.run_experiment(str(CORPUS / "covers"), str(CORPUS / "texts"), "A", artifacts=tmp)
        golden = (CORPUS.parent / "golden_report_A.csv").read_text()
        check(report == golden, "experiment report matches golden")
        check(len(list(pathlib.Path(tmp).glob("*.bmp"))) == 20, "experiment artifacts written")

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
