#!/usr/bin/env python3
"""Plot 1D snapshot CSVs (x,eta_bar,q_bar) and 2D grid CSVs written by swhomog."""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def read_1d(path):
    data = np.genfromtxt(path, delimiter=",", skip_header=1, names=True)
    return data["x"], data["eta_bar"]


def read_2d(path, field):
    with open(path) as f:
        header = dict(tok.split("=") for tok in f.readline()[2:].split())
    nx, ny = int(header["nx"]), int(header["ny"])
    data = np.genfromtxt(path, delimiter=",", skip_header=1, names=True)
    shape = (nx, ny)
    return data["x"].reshape(shape), data["y"].reshape(shape), data[field].reshape(shape)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("files", nargs="+")
    p.add_argument("--field", default="eta", help="column to draw for 2D files")
    p.add_argument("--out", default="plot.png")
    args = p.parse_args()

    fig, ax = plt.subplots(figsize=(9, 4))
    for path in args.files:
        with open(path) as f:
            first = f.readline()
        if "nx=" in first:
            x, y, v = read_2d(path, args.field)
            mesh = ax.pcolormesh(x, y, v, shading="auto")
            fig.colorbar(mesh, ax=ax, label=args.field)
            ax.set_ylabel("y")
        else:
            x, eta = read_1d(path)
            ax.plot(x, eta, label=path)
            ax.set_ylabel("eta_bar")
            ax.legend(fontsize="small")
    ax.set_xlabel("x")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
