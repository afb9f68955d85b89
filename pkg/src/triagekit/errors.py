"""Exception types shared across the engine."""


class TriageKitError(Exception):
    """Base class for all engine errors."""


class MalformedRecord(TriageKitError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateId(TriageKitError):
    def __init__(self, request_id: str):
        super().__init__(f"duplicate request id {request_id!r}")
        self.request_id = request_id


class TooFewRecords(TriageKitError):
    pass


class SingleClass(TriageKitError):
    pass


class EmptyCorpus(TriageKitError):
    pass


class EmptyInput(TriageKitError):
    pass


class DegenerateLabels(TriageKitError):
    pass


class InvalidParameter(TriageKitError):
    pass


class WidthMismatch(TriageKitError):
    pass


class TooFewRowsPerFold(TriageKitError):
    pass


class CoverageMismatch(TriageKitError):
    pass


class MissingSource(TriageKitError):
    pass


class EmptyDocuments(TriageKitError):
    pass


class UnknownBrand(TriageKitError):
    pass


class NoValidPath(TriageKitError):
    pass


class VersionMismatch(TriageKitError):
    pass


class CorruptArtifact(TriageKitError):
    pass
