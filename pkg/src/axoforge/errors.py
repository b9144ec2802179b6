"""Exception hierarchy shared by every axoforge stage."""


class AxoforgeError(Exception):
    """Base class for all errors raised by axoforge."""


# geometry


class GeometryError(AxoforgeError, ValueError):
    pass


class EmptyArc(GeometryError):
    pass


class InvalidRadius(GeometryError):
    pass


class DegenerateCarrier(GeometryError):
    pass


class TooShort(GeometryError):
    pass


class OutOfRange(GeometryError):
    pass


# scene model


class UnknownColor(AxoforgeError, KeyError):
    def __init__(self, name, candidates=()):
        self.name = name
        self.candidates = tuple(candidates)
        msg = f"unknown color {name!r}"
        if self.candidates:
            msg += " (did you mean " + ", ".join(self.candidates) + "?)"
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class UnknownOption(AxoforgeError, ValueError):
    def __init__(self, key, detail=None):
        self.key = key
        msg = f"unknown option {key!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class BadValue(AxoforgeError, ValueError):
    def __init__(self, key, text, detail=None):
        self.key = key
        self.text = text
        msg = f"bad value {text!r} for option {key!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


# two-pass helper files


class Ax1Format(AxoforgeError, ValueError):
    def __init__(self, lineno, detail):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {detail}")


class DuplicateId(AxoforgeError, ValueError):
    def __init__(self, ident, lineno):
        self.ident = ident
        self.lineno = lineno
        super().__init__(f"line {lineno}: duplicate id {ident}")


class EntryError(AxoforgeError):
    """A failure while processing one ``.ax1`` entry; carries the entry id."""

    def __init__(self, ident, cause):
        self.ident = ident
        self.cause = cause
        super().__init__(f"entry {ident}: {cause}")


class InvalidPrimitive(AxoforgeError, ValueError):
    pass
