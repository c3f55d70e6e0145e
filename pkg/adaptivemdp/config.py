""" Class to handle the interface with the rc files, plus the errors the package raises """
from configparser import ConfigParser

import os, sys, logging.config

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

class AdaptiveMdpError(RuntimeError):
    pass

class ModelValidationError(AdaptiveMdpError):
    def __init__(self, message, rowLabel=None):
        AdaptiveMdpError.__init__(self, message)
        self.rowLabel = rowLabel

class SpecValidationError(AdaptiveMdpError):
    def __init__(self, message, fileName=None, lineNumber=None):
        location = ""
        if fileName:
            location = fileName + (":" + str(lineNumber) if lineNumber else "") + ": "
        AdaptiveMdpError.__init__(self, location + message)
        self.fileName = fileName
        self.lineNumber = lineNumber

class SolverFailure(AdaptiveMdpError):
    def __init__(self, message, residual=None, diagnostics=None):
        if residual is not None:
            message += " (residual " + repr(residual) + ")"
        AdaptiveMdpError.__init__(self, message)
        self.residual = residual
        self.diagnostics = diagnostics or {}

class EnumerationCapExceeded(AdaptiveMdpError):
    pass

class EpisodeFailure(AdaptiveMdpError):
    def __init__(self, cause, policy, replicate, step):
        AdaptiveMdpError.__init__(self, "policy " + policy + ", replicate " + str(replicate) +
                                  ", step " + str(step) + ": " + str(cause))
        self.cause = cause
        self.policy = policy
        self.replicate = replicate
        self.step = step

class RegretAuditMismatch(AdaptiveMdpError):
    def __init__(self, policy, replicate, accrued, recounted):
        AdaptiveMdpError.__init__(self, "policy " + policy + ", replicate " + str(replicate) +
                                  ": regret accrued per step " + repr(accrued) +
                                  " disagrees with the count tables " + repr(recounted))
        self.accrued = accrued
        self.recounted = recounted


class RcFileHandler:
    def __init__(self, rcFiles, rcText=None):
        self.parser = ConfigParser(strict=False)
        self.parser.optionxform = str # state and action labels are case sensitive
        self.diag = None
        self.fileNames = []
        if rcText is not None:
            self.parser.read_string(rcText)
        for rcFile in rcFiles or []:
            if not os.path.isfile(rcFile):
                sys.stderr.write("WARNING: RC file at " + rcFile + " does not exist, ignoring.\n")
            else:
                self.fileNames.append(rcFile)
        self.parser.read(self.fileNames)

    @staticmethod
    def getPersonalPath(fileName):
        return os.path.join(os.path.expanduser("~/.adaptivemdp"), fileName)

    def get(self, *args):
        return self._get(self.parser.get, *args)

    def getint(self, *args):
        return self._get(self.parser.getint, *args)

    def getboolean(self, *args):
        return self._get(self.parser.getboolean, *args)

    def _get(self, getMethod, setting, sections, defaultVal=None):
        for section in sections:
            if self.parser.has_section(section) and self.parser.has_option(section, setting):
                try:
                    return getMethod(section, setting)
                except ValueError as e:
                    raise SpecValidationError("bad value for " + setting + " in [" + section + "]: " + str(e),
                                              *self.findLocation(section, setting))
        return defaultVal

    def getList(self, setting, sections):
        result = []
        for section in sections:
            if self.parser.has_section(section) and self.parser.has_option(section, setting):
                listStr = self.parser.get(section, setting).strip()
                if listStr:
                    result += [ item.strip() for item in listStr.split(",") ]
        return result

    def getSection(self, section):
        if self.parser.has_section(section):
            return dict(self.parser.items(section))
        else:
            return {}

    def sectionsWithPrefix(self, prefix):
        return [ section for section in self.parser.sections() if section.startswith(prefix) ]

    def findLocation(self, section, setting=None):
        # configparser forgets line numbers, so look for them in the most recent file defining the section
        for fileName in reversed(self.fileNames):
            currSection = None
            with open(fileName) as f:
                for lineNumber, line in enumerate(f, start=1):
                    stripped = line.strip()
                    if stripped.startswith("[") and stripped.endswith("]"):
                        currSection = stripped[1:-1].strip()
                        if currSection == section and setting is None:
                            return fileName, lineNumber
                    elif currSection == section and setting is not None:
                        key = stripped.split("=", 1)[0].split(":", 1)[0].strip()
                        if key == setting:
                            return fileName, lineNumber
        return (self.fileNames[-1] if self.fileNames else None), None

    def setUpLogging(self, mainLogName):
        logConfigFile = self.get("log_config_file", [ "general" ],
                                 self.getPersonalPath("logging.conf"))
        if os.path.isfile(logConfigFile):
            local_dir = os.path.dirname(os.path.abspath(logConfigFile))
            if os.name == "nt":
                # Gets passed through eval. Windows path separators get confused with escape character...
                local_dir = local_dir.replace("\\", "\\\\")
            defaults = { "LOCAL_DIR" : local_dir }
            logging.config.fileConfig(logConfigFile, defaults, disable_existing_loggers=False)
        self.diag = logging.getLogger(mainLogName)
        return self.diag
