"""Reports for the four accessibility properties every model must have."""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import Message, render_message

PROPERTIES = (
    "seriality",
    "functionality",
    "conditional-reflexivity",
    "epistemic-image",
)


@dataclass(frozen=True)
class Violation:
    prop: str
    msg: Message
    agent: str
    state: object
    detail: str = ""

    def __str__(self) -> str:
        s = f"{self.prop} violated for [{render_message(self.msg)}]{self.agent} at {self.state}"
        return f"{s}: {self.detail}" if self.detail else s


@dataclass
class InterfaceReport:
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_property(self) -> dict[str, list[Violation]]:
        out: dict[str, list[Violation]] = {p: [] for p in PROPERTIES}
        for v in self.violations:
            out[v.prop].append(v)
        return out

    def summary(self) -> str:
        lines = []
        for prop, vs in self.by_property().items():
            lines.append(f"{prop}: {'PASS' if not vs else f'FAIL ({len(vs)})'}")
            lines += [f"  {v}" for v in vs[:5]]
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.summary()
