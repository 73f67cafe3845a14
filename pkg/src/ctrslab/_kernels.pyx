# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; behaviour is identical to ``_kernels_py``."""

from ctrslab._term import App, Var

BACKEND = "cython"

cdef object _Var = Var
cdef object _App = App


cpdef object match(object pattern, object subject, dict subst=None):
    cdef dict sigma = {} if subst is None else dict(subst)
    cdef list stack = [(pattern, subject)]
    cdef object p, s, bound
    cdef tuple pargs, sargs
    cdef Py_ssize_t i, n
    while stack:
        p, s = stack.pop()
        if type(p) is _Var:
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
        else:
            if type(s) is not _App or s.fn != p.fn:
                return None
            pargs = p.args
            sargs = s.args
            n = len(pargs)
            if n != len(sargs):
                return None
            for i in range(n):
                stack.append((pargs[i], sargs[i]))
    return sigma


cpdef object apply_subst(object t, dict subst):
    cdef tuple args
    if type(t) is _Var:
        return subst.get(t.name, t)
    args = t.args
    if not args:
        return t
    return _App(t.fn, [apply_subst(a, subst) for a in args])


cpdef object subterm_at(object t, tuple pos):
    cdef Py_ssize_t i
    for i in pos:
        if type(t) is not _App or not 0 <= i < len(t.args):
            raise IndexError("position %r does not exist" % (pos,))
        t = t.args[i]
    return t


cdef object _replace(object t, tuple pos, Py_ssize_t k, object u):
    cdef Py_ssize_t i
    cdef list args
    if k == len(pos):
        return u
    i = pos[k]
    if type(t) is not _App or not 0 <= i < len(t.args):
        raise IndexError("position %r does not exist" % (pos,))
    args = list(t.args)
    args[i] = _replace(args[i], pos, k + 1, u)
    return _App(t.fn, args)


cpdef object replace_at(object t, object pos, object u):
    return _replace(t, tuple(pos), 0, u)


cpdef list positions(object t):
    cdef list out = []
    cdef list stack = [((), t)]
    cdef tuple pos, args
    cdef object s
    cdef Py_ssize_t i
    while stack:
        pos, s = stack.pop()
        out.append((pos, s))
        if type(s) is _App:
            args = s.args
            for i in range(len(args) - 1, -1, -1):
                stack.append((pos + (i,), args[i]))
    return out


cpdef Py_ssize_t term_size(object t):
    cdef Py_ssize_t n = 1
    if type(t) is _Var:
        return 1
    for a in t.args:
        n += term_size(a)
    return n


cpdef list one_step(object t, dict index):
    cdef list out = []
    cdef list rules
    cdef object sigma, s, label, lhs, rhs
    cdef tuple pos
    for pos, s in positions(t):
        if type(s) is not _App:
            continue
        rules = index.get(s.fn)
        if not rules:
            continue
        for label, lhs, rhs in rules:
            sigma = match(lhs, s)
            if sigma is not None:
                out.append((pos, label, _replace(t, pos, 0, apply_subst(rhs, sigma))))
    return out
