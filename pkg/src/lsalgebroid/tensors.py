"""Sections, covectors and the wedge-tensor carriers.

A degree-n tensor stores coefficients keyed by ``(J, l)`` where ``J`` is a
strictly increasing n-tuple of basis indices (the wedge part) and ``l`` the
last slot.  Evaluation uses the determinant convention

    (y_1 ^ ... ^ y_n)(xi_1, ..., xi_n) = det <xi_a, y_b>

so that contracting the first slot is the usual interior product and
``<phi, y_1 ^ ... ^ y_n (x) y> = phi(y_1, ..., y_n, y)`` for arbitrary sections.

``PolyTensor`` lives in the wedge powers of A tensor A, ``FormTensor`` in
those of A* tensor A*.  Both are plain coefficient containers; which bundle
they belong to only matters for naming, and ``dual_view`` swaps the label
when a structure on A* reinterprets one as the other.
"""

from __future__ import annotations

from itertools import permutations

from .errors import DegreeError, ShapeMismatch


def _first_base(coeffs):
    return coeffs[0].base


class _Vector:
    __slots__ = ("coeffs",)
    prefix = "v"

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(coeffs))
        if not self.coeffs:
            raise ShapeMismatch("vectors need rank >= 1")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, base, rank):
        return cls((base.zero,) * rank)

    @classmethod
    def basis(cls, base, rank, i):
        return cls(tuple(base.one if k == i else base.zero for k in range(rank)))

    @property
    def rank(self):
        return len(self.coeffs)

    @property
    def base(self):
        return self.coeffs[0].base

    def _check(self, other):
        if len(other.coeffs) != len(self.coeffs):
            raise ShapeMismatch(f"rank {len(self.coeffs)} vs {len(other.coeffs)}")

    def __add__(self, other):
        self._check(other)
        return type(self)(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return type(self)(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return type(self)(-a for a in self.coeffs)

    def scale(self, f):
        return type(self)(f * a for a in self.coeffs)

    def __rmul__(self, f):
        return self.scale(f)

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, _Vector):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.prefix, tuple(str(c) for c in self.coeffs)))

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __str__(self):
        terms = [f"({c})*{self.label(i)}" for i, c in enumerate(self.coeffs) if not c.is_zero]
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def label(self, i):
        return f"{self.prefix}{i + 1}"


class Section(_Vector):
    """Element of Gamma(A) in the basis e_1..e_r."""

    __slots__ = ()
    prefix = "e"

    def dual_view(self):
        return Covector(self.coeffs)


class Covector(_Vector):
    """Element of Gamma(A*) in the dual basis eps^1..eps^r."""

    __slots__ = ()
    prefix = "ε"

    def dual_view(self):
        return Section(self.coeffs)


def pair(a, b):
    """Canonical pairing sum_i a_i b_i of a vector with a dual vector."""
    if len(a.coeffs) != len(b.coeffs):
        raise ShapeMismatch(f"cannot pair rank {len(a.coeffs)} with rank {len(b.coeffs)}")
    total = None
    for x, y in zip(a.coeffs, b.coeffs):
        if x.is_zero or y.is_zero:
            continue
        total = x * y if total is None else total + x * y
    return a.coeffs[0].base.zero if total is None else total


def det_small(matrix):
    """Determinant by permutation expansion; for the n <= 4 wedge blocks."""
    n = len(matrix)
    if n == 0:
        return None
    total = None
    for perm in permutations(range(n)):
        term = None
        for row, col in enumerate(perm):
            entry = matrix[row][col]
            if entry.is_zero:
                term = None
                break
            term = entry if term is None else term * entry
        else:
            if term is None:
                continue
            if _parity(perm):
                term = -term
            total = term if total is None else total + term
    return total


def _parity(seq):
    seq = list(seq)
    odd = False
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                odd = not odd
    return odd


def sort_indices(indices):
    """Sort a wedge index tuple; return (sign, sorted tuple) or None on repeats."""
    if len(set(indices)) != len(indices):
        return None
    sign = -1 if _parity(indices) else 1
    return sign, tuple(sorted(indices))


class _WedgeTensor:
    __slots__ = ("base", "rank", "degree", "terms")
    vector_cls = None
    dual_vector_cls = None

    def __init__(self, base, rank, degree, terms=None):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "degree", degree)
        clean = {}
        for key, value in (terms or {}).items():
            J, l = key
            if len(J) != degree or any(a >= b for a, b in zip(J, J[1:])):
                raise ShapeMismatch(f"wedge indices {J} must be strictly increasing of length {degree}")
            if not (0 <= l < rank) or any(not (0 <= j < rank) for j in J):
                raise ShapeMismatch(f"index out of range in {key}")
            if not value.is_zero:
                clean[(tuple(J), l)] = value
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, base, rank, degree):
        return cls(base, rank, degree, {})

    @classmethod
    def basis_element(cls, base, rank, J, l, coeff=None):
        return cls(base, rank, len(J), {(tuple(J), l): base.one if coeff is None else coeff})

    @classmethod
    def from_vector(cls, v):
        return cls(v.base, len(v.coeffs), 0, {((), l): c for l, c in enumerate(v.coeffs)})

    @classmethod
    def basis_keys(cls, rank, degree):
        from itertools import combinations

        return [(J, l) for J in combinations(range(rank), degree) for l in range(rank)]

    def to_vector(self):
        if self.degree != 0:
            raise DegreeError("only degree-0 tensors are vectors")
        zero = self.base.zero
        return self.vector_cls(self.terms.get(((), l), zero) for l in range(self.rank))

    def dual_view(self):
        return self.partner(self.base, self.rank, self.degree, self.terms)

    def component(self, J, l):
        return self.terms.get((tuple(J), l), self.base.zero)

    def value_at(self, indices, last):
        """Value on basis arguments given by an arbitrary index sequence."""
        s = sort_indices(tuple(indices))
        if s is None:
            return self.base.zero
        sign, J = s
        c = self.component(J, last)
        return c if sign > 0 else -c

    def _same(self, other):
        if type(self) is not type(other) and not isinstance(other, _WedgeTensor):
            raise ShapeMismatch("incompatible tensor types")
        if (self.rank, self.degree) != (other.rank, other.degree):
            raise ShapeMismatch(
                f"tensor shapes differ: (rank {self.rank}, degree {self.degree}) vs "
                f"(rank {other.rank}, degree {other.degree})"
            )

    def __add__(self, other):
        self._same(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms[key] + value if key in terms else value
        return type(self)(self.base, self.rank, self.degree, terms)

    def __neg__(self):
        return type(self)(self.base, self.rank, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        return type(self)(self.base, self.rank, self.degree, {k: f * v for k, v in self.terms.items()})

    def __rmul__(self, f):
        return self.scale(f)

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, _WedgeTensor):
            return NotImplemented
        if (self.rank, self.degree) != (other.rank, other.degree):
            return False
        return (self - other).is_zero

    def __hash__(self):
        return hash((self.rank, self.degree, tuple(sorted((k, str(v)) for k, v in self.terms.items()))))

    def evaluate(self, args):
        """Evaluate on ``degree + 1`` dual vectors (wedge slots first, then the last slot)."""
        if len(args) != self.degree + 1:
            raise ShapeMismatch(f"degree-{self.degree} tensor takes {self.degree + 1} arguments")
        *wedge_args, last = args
        total = None
        for (J, l), coeff in self.terms.items():
            tail = last.coeffs[l]
            if tail.is_zero:
                continue
            if J:
                d = det_small([[v.coeffs[j] for j in J] for v in wedge_args])
                if d is None or d.is_zero:
                    continue
                term = coeff * d * tail
            else:
                term = coeff * tail
            total = term if total is None else total + term
        return self.base.zero if total is None else total

    def contract_left(self, v):
        """Insert ``v`` into the first wedge slot."""
        if self.degree == 0:
            raise DegreeError("left contraction needs degree >= 1")
        terms = {}
        for (J, l), coeff in self.terms.items():
            for a, j in enumerate(J):
                c = v.coeffs[j]
                if c.is_zero:
                    continue
                key = (J[:a] + J[a + 1:], l)
                term = coeff * c if a % 2 == 0 else -(coeff * c)
                terms[key] = terms[key] + term if key in terms else term
        out = type(self)(self.base, self.rank, self.degree - 1, terms)
        return out

    def contract_right(self, v):
        """Insert ``v`` into the last slot; the result lies in the pure wedge power."""
        terms = {}
        for (J, l), coeff in self.terms.items():
            c = v.coeffs[l]
            if c.is_zero:
                continue
            term = coeff * c
            terms[J] = terms[J] + term if J in terms else term
        return Wedge(self.base, self.rank, self.degree, terms, type(self))

    def pairing(self, other):
        """<self, other> summed over matching basis keys."""
        self._same(other)
        total = None
        for key, value in self.terms.items():
            o = other.terms.get(key)
            if o is None:
                continue
            total = value * o if total is None else total + value * o
        return self.base.zero if total is None else total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (J, l), c in sorted(self.terms.items()):
            wedge = "^".join(f"{self.vector_cls.prefix}{j + 1}" for j in J)
            slot = f"{self.vector_cls.prefix}{l + 1}"
            parts.append(f"({c})*{wedge + '⊗' if wedge else ''}{slot}")
        return " + ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}(degree={self.degree}, {self})"


class PolyTensor(_WedgeTensor):
    """Element of Gamma(wedge^n A tensor A)."""

    __slots__ = ()
    vector_cls = Section
    dual_vector_cls = Covector


class FormTensor(_WedgeTensor):
    """Element of Gamma(wedge^n A* tensor A*); the (n+1)-cochains."""

    __slots__ = ()
    vector_cls = Covector
    dual_vector_cls = Section


PolyTensor.partner = FormTensor
FormTensor.partner = PolyTensor


def tensor_cls_for(vector_cls):
    return PolyTensor if issubclass(vector_cls, Section) else FormTensor


class Wedge:
    """Pure wedge-power element; produced by right contraction."""

    __slots__ = ("base", "rank", "degree", "terms", "tensor_cls")

    def __init__(self, base, rank, degree, terms, tensor_cls):
        self.base = base
        self.rank = rank
        self.degree = degree
        self.terms = {J: c for J, c in terms.items() if not c.is_zero}
        self.tensor_cls = tensor_cls

    def __eq__(self, other):
        if not isinstance(other, Wedge):
            return NotImplemented
        return (self.rank, self.degree, self.terms) == (other.rank, other.degree, other.terms)

    __hash__ = None

    def otimes(self, v):
        """Tensor with a vector placed in the last slot."""
        terms = {}
        for J, c in self.terms.items():
            for l, x in enumerate(v.coeffs):
                if not x.is_zero:
                    terms[(J, l)] = c * x
        return self.tensor_cls(self.base, self.rank, self.degree, terms)

    @classmethod
    def from_vector(cls, v):
        tensor_cls = tensor_cls_for(type(v))
        return cls(v.base, len(v.coeffs), 1, {(i,): c for i, c in enumerate(v.coeffs)}, tensor_cls)

    @property
    def scalar(self):
        if self.degree != 0:
            raise DegreeError("only degree-0 wedges are scalars")
        return self.terms.get((), self.base.zero)


def outer(u, v):
    """Degree-1 tensor u (x) v."""
    return Wedge.from_vector(u).otimes(v)
