"""Pass/fail records shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Witness:
    """First failing input (basis labels or sample description) and the nonzero residual."""

    inputs: tuple
    residual: str

    def to_dict(self):
        return {"inputs": list(self.inputs), "residual": self.residual}

    def __str__(self):
        return f"({', '.join(self.inputs)}) -> {self.residual}"


@dataclass(frozen=True)
class Report:
    name: str
    passed: bool
    witness: Witness | None = None
    details: dict = field(default_factory=dict)
    children: tuple = ()

    def __bool__(self):
        return self.passed

    @classmethod
    def ok(cls, name, **details):
        return cls(name, True, None, details)

    @classmethod
    def fail(cls, name, inputs, residual, **details):
        return cls(name, False, Witness(tuple(inputs), str(residual)), details)

    @classmethod
    def combine(cls, name, reports, **details):
        reports = tuple(reports)
        first = next((r for r in reports if not r.passed), None)
        witness = first.witness if first is not None else None
        return cls(name, first is None, witness, details, reports)

    def find(self, name):
        if self.name == name:
            return self
        for child in self.children:
            found = child.find(name)
            if found is not None:
                return found
        return None

    def failures(self):
        if not self.children:
            return [] if self.passed else [self]
        out = []
        for child in self.children:
            out.extend(child.failures())
        if not out and not self.passed:
            out.append(self)
        return out

    def to_dict(self):
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in sorted(self.details.items())}
        if self.children:
            out["checks"] = [c.to_dict() for c in self.children]
        return out

    def lines(self, indent=0):
        mark = "PASS" if self.passed else "FAIL"
        text = f"{'  ' * indent}[{mark}] {self.name}"
        if self.witness is not None:
            text += f"  witness {self.witness}"
        out = [text]
        for child in self.children:
            out.extend(child.lines(indent + 1))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _jsonable(value):
    if isinstance(value, (bool, int, float)) or value is None:
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)
