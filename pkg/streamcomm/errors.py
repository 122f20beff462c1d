class StreamcommError(ValueError):
    """Base class for errors raised by the detection pipeline"""


class EdgeParseError(StreamcommError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CommunityParseError(StreamcommError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DistanceTreeError(StreamcommError):
    """A distance-tree precondition or invariant was violated (signals a sampler bug)"""


class SamplerConfigError(StreamcommError):
    pass


class QueryNotSampledError(StreamcommError):
    def __init__(self, missing):
        super().__init__(f"query nodes absent from the sampled subgraph: {sorted(missing)}")
        self.missing = frozenset(missing)
