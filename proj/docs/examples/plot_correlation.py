"""Plot rel_dev against h from `zmw correlation` CSV output.

    zmw correlation --config docs/examples/correlation.json > corr.csv
    python3 docs/examples/plot_correlation.py corr.csv
"""
import sys

import matplotlib.pyplot as plt
import pandas as pd

df = pd.read_csv(sys.argv[1], comment="#")
for u, rows in df.groupby("u"):
    plt.semilogy(rows["h"], rows["rel_dev"], "o-", label=f"u = {u:g}")
plt.xlabel("h")
plt.ylabel("|D - m| / |m|")
plt.legend()
plt.savefig(sys.argv[2] if len(sys.argv) > 2 else "correlation.png", dpi=120)
