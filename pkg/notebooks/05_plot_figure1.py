# # Plotting the SNR sweep
#
# Produce the CSV with the command line tool, then plot it. matplotlib is
# not a dependency of the package.
#
#     capacityloss figure1 --jobs 4 -o fig1.csv
#
# A gnuplot one-liner does the same job:
#
#     gnuplot -p -e "set datafile separator ','; set key autotitle columnhead;
#       plot for [i=2:5] 'fig1.csv' using 1:i with lines"

import io
import subprocess
import sys

import numpy as np

from capacityloss.cli import main

buf = io.StringIO()
stdout, sys.stdout = sys.stdout, buf
try:
    main(["figure1", "--snr-start", "0", "--snr-stop", "80", "--snr-step", "4", "--qam", "10", "16"])
finally:
    sys.stdout = stdout
text = buf.getvalue()
lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
cols = lines[0].split(",")
data = np.genfromtxt(io.StringIO("\n".join(lines[1:])), delimiter=",")
print(cols)
print(data[-3:])

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for k, name in enumerate(cols[1:], start=1):
        ax.plot(data[:, 0], data[:, k], label=name.removesuffix("_nats"))
    ax.set_xlabel("1/sigma^2 [dB]")
    ax.set_ylabel("L(sigma) [nats]")
    ax.set_ylim(-1, 4)
    ax.legend()
    fig.savefig("fig1.png", dpi=120, bbox_inches="tight")
    print("wrote fig1.png")
