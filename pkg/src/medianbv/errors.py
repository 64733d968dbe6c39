"""Exception hierarchy shared by all modules."""


class MedianBVError(Exception):
    """Base class for library errors."""


class InvalidInput(MedianBVError, ValueError):
    """Malformed structure, function, point, or file payload."""


class SizeCapExceeded(MedianBVError):
    """Instance too large for exhaustive check."""

    def __init__(self, what: str, n: int, cap: int):
        self.what = what
        self.n = n
        self.cap = cap
        super().__init__(
            f"too large for exhaustive check: {what} needs n <= {cap}, got n = {n}"
        )


class NotASubalgebra(MedianBVError):
    def __init__(self, points):
        self.points = tuple(sorted(points))
        super().__init__(f"not a subalgebra: {list(self.points)}")


class NotLinear(MedianBVError):
    def __init__(self, points):
        self.points = tuple(sorted(points))
        super().__init__(f"not a linear subset: {list(self.points)}")


class CoverInvalid(MedianBVError):
    pass


class SourceExhausted(MedianBVError):
    """The function source ran dry before a selection stage was certified."""
