"""Walk through the two text encodings and the keyword filter.

Run:  python3 demos/01_encoding_and_keywords.py
"""

import numpy as np

from peernudge import featurize, load_alphabet, load_keywords, quantize

alphabet = load_alphabet()
print(f"alphabet has {alphabet.size} symbols")
print(f"  first: {alphabet.chars[:10]!r}...  last: {alphabet.chars[-6:]!r}")
print(f"  index('a') = {alphabet.index_of('a')}, index(' ') = {alphabet.index_of(' ')}")

# --- one-hot quantization -------------------------------------------------
text = "Vape ON! ☁☁"
mat = quantize(text, alphabet, max_len=16)
print(f"\nquantize({text!r}) -> matrix {mat.shape}")
for j, ch in enumerate(text.lower()[:16]):
    column = mat[:, j]
    hit = np.argmax(column) if column.any() else None
    shown = alphabet.chars[hit] if hit is not None else "<out-of-alphabet>"
    print(f"  col {j:2d} {ch!r:6} -> {shown!r}")

# --- hashed bigram features -------------------------------------------------
vec = featurize("smoke smoke break", alphabet, dim=64)
print(f"\nfeaturize -> {np.count_nonzero(vec)} active buckets of 64, "
      f"norm = {np.linalg.norm(vec):.3f}")

# --- keyword filtering ------------------------------------------------------
keywords = load_keywords()
print(f"\n{len(keywords)} keyword phrases loaded")
for sample in ("I quit vaping today",
               "try green smoke now",
               "menthols are banned",     # no boundary match for "menthol"
               "macbook chargers on sale"):
    print(f"  {sample!r:40} -> {keywords.match(sample)}")
