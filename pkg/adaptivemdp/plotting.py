""" SVG regret plots: one mean curve and 95% confidence band per policy """

import matplotlib
matplotlib.use("Agg")
from matplotlib import pyplot as plt

import numpy as np

# fixed salt and no date keep the SVG bytes identical between runs
matplotlib.rcParams["svg.hashsalt"] = "adaptivemdp"
matplotlib.rcParams["svg.fonttype"] = "none"


def writeRegretSvg(fileName, curvesByLabel, title, logX=False):
    figure, axes = plt.subplots(figsize=(8, 5))
    try:
        for label, curves in curvesByLabel.items():
            times = np.arange(1, len(curves.mean) + 1)
            line, = axes.plot(times, curves.mean, label=label, linewidth=1.2)
            axes.fill_between(times, curves.mean - curves.halfWidth, curves.mean + curves.halfWidth,
                              color=line.get_color(), alpha=0.2, linewidth=0)
        if logX:
            axes.set_xscale("log")
        axes.set_xlabel("t")
        axes.set_ylabel("mean cumulative regret")
        axes.set_title(title)
        axes.legend(loc="upper left")
        axes.grid(True, alpha=0.3)
        figure.savefig(fileName, format="svg", metadata={ "Date" : None })
    finally:
        plt.close(figure)
