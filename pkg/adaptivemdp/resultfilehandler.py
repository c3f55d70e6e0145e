""" Very basic interface for writing aggregate regret curves to a CSV file """
import csv, os

HEADER = [ "t", "policy", "mean_regret", "variance", "ci_low", "ci_high" ]

class ResultFileHandler(object):
    def __init__(self, file):
        self.file = file
        self.recordedLabels = []
        dirName = os.path.dirname(file)
        if dirName and not os.path.isdir(dirName):
            os.makedirs(dirName)
        with open(self.file, "w", newline="") as writeFile:
            csv.writer(writeFile, lineterminator="\n").writerow(HEADER)

    def record(self, label, curves):
        if label in self.recordedLabels:
            raise ValueError("curves for " + repr(label) + " already recorded in " + self.file)
        self.recordedLabels.append(label)
        low = curves.mean - curves.halfWidth
        high = curves.mean + curves.halfWidth
        with open(self.file, "a", newline="") as writeFile:
            writer = csv.writer(writeFile, lineterminator="\n")
            for index in range(len(curves.mean)):
                writer.writerow([ index + 1, label, repr(float(curves.mean[index])), repr(float(curves.variance[index])),
                                  repr(float(low[index])), repr(float(high[index])) ])


def readResults(fileName):
    """ Rows of a results file keyed by policy label, as lists of float tuples (t, mean, variance, low, high) """
    results = {}
    with open(fileName, newline="") as readFile:
        reader = csv.reader(readFile)
        header = next(reader)
        if header != HEADER:
            raise ValueError(fileName + " has header " + repr(header) + ", expected " + repr(HEADER))
        for row in reader:
            results.setdefault(row[1], []).append((int(row[0]),) + tuple(float(value) for value in row[2:]))
    return results
