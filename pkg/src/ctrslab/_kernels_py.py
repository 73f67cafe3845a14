"""Pure-Python hot kernels. ``_kernels.pyx`` mirrors this module function for function."""

from ctrslab._term import App, Var

BACKEND = "python"


def match(pattern, subject, subst=None):
    """Syntactic matching. Returns the extended binding dict, or None.

    ``subst`` (var name -> term) is never mutated. Subject variables are
    treated as constants.
    """
    sigma = {} if subst is None else dict(subst)
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if type(p) is Var:
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
        else:
            if type(s) is not App or s.fn != p.fn or len(s.args) != len(p.args):
                return None
            stack.extend(zip(p.args, s.args))
    return sigma


def apply_subst(t, subst):
    if type(t) is Var:
        return subst.get(t.name, t)
    if not t.args:
        return t
    return App(t.fn, [apply_subst(a, subst) for a in t.args])


def subterm_at(t, pos):
    for i in pos:
        if type(t) is not App or not 0 <= i < len(t.args):
            raise IndexError("position %r does not exist" % (tuple(pos),))
        t = t.args[i]
    return t


def replace_at(t, pos, u):
    if not pos:
        return u
    i = pos[0]
    if type(t) is not App or not 0 <= i < len(t.args):
        raise IndexError("position %r does not exist" % (tuple(pos),))
    args = list(t.args)
    args[i] = replace_at(args[i], pos[1:], u)
    return App(t.fn, args)


def positions(t):
    """All (position, subterm) pairs in pre-order."""
    out = []
    stack = [((), t)]
    while stack:
        pos, s = stack.pop()
        out.append((pos, s))
        if type(s) is App:
            for i in range(len(s.args) - 1, -1, -1):
                stack.append((pos + (i,), s.args[i]))
    return out


def term_size(t):
    if type(t) is Var:
        return 1
    n = 1
    for a in t.args:
        n += term_size(a)
    return n


def one_step(t, index):
    """Every single rewrite step of ``t``.

    ``index`` maps a root symbol to a list of ``(label, lhs, rhs)``. Returns a
    list of ``(position, label, result)`` in pre-order position order, then
    rule order.
    """
    out = []
    for pos, s in positions(t):
        if type(s) is not App:
            continue
        rules = index.get(s.fn)
        if not rules:
            continue
        for label, lhs, rhs in rules:
            sigma = match(lhs, s)
            if sigma is not None:
                out.append((pos, label, replace_at(t, pos, apply_subst(rhs, sigma))))
    return out
