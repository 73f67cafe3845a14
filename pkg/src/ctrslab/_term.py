"""Term node classes shared by both kernel backends."""


class Var:
    """A term variable. Two variables are equal iff their names are."""

    __slots__ = ("name", "_hash")

    def __init__(self, name):
        self.name = name
        self._hash = hash(("V", name))

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (Var, (self.name,))


class App:
    """Function symbol application ``fn(args...)``; constants have ``args == ()``."""

    __slots__ = ("fn", "args", "_hash")

    def __init__(self, fn, args=()):
        self.fn = fn
        self.args = tuple(args)
        self._hash = hash((fn, self.args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is App
            and other._hash == self._hash
            and other.fn == self.fn
            and other.args == self.args
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return self.fn
        return "%s(%s)" % (self.fn, ", ".join(map(repr, self.args)))

    def __reduce__(self):
        return (App, (self.fn, self.args))
