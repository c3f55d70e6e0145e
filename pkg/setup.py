#!/usr/bin/env python
from setuptools import setup
import os, shutil

if os.name == "nt":
    shutil.copyfile("bin/adaptivemdp", "bin/adaptivemdp.py")
    scripts=["bin/adaptivemdp.py"]
else:
    scripts=["bin/adaptivemdp"]

setup(name='AdaptiveMdp',
      version="0.0.dev0",
      description="Adaptive control of average-reward MDPs with unknown transition probabilities",
      long_description="A benchmark laboratory for learning to control finite Markov decision processes whose rewards are known but whose transition probabilities are not. It solves the average-reward optimality equations for a given model, and runs three adaptive policies against it: a KL upper-confidence-bound index policy (UCB), a minimum empirical divergence policy (DMED) and Dirichlet posterior sampling (PS), alongside the complete-information oracle and a uniform-random baseline.\n\nExperiments are described in rc files. Each run writes the mean cumulative regret over replications, its variance and a 95% confidence band as CSV, plus an SVG plot. A robustness mode restarts the policies from deliberately misleading count tables to see how quickly they recover.",
      packages=["adaptivemdp"],
      install_requires=["numpy>=1.17", "scipy>=1.4", "matplotlib>=3.4"],
      extras_require={ "test" : [ "pytest" ] },
      python_requires=">=3.7",
      classifiers=[ "Programming Language :: Python",
                    "Programming Language :: Python :: 3",
                    "Operating System :: OS Independent",
                    "Environment :: Console",
                    "Intended Audience :: Science/Research",
                    "Topic :: Scientific/Engineering :: Mathematics" ],
      scripts=scripts
      )
