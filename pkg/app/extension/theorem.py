import logging
from dataclasses import dataclass, field
from typing import Dict, List

from app.algebra.structure import is_lie
from app.extension.checks import commutators, nilindependent, off_diagonal_violations, shape_check
from app.extension.normalize import eliminate_sigma
from app.extension.residuals import residuals_4
from app.extension.spec import ExtensionSpec, build_L

logger = logging.getLogger(__name__)


@dataclass
class TheoremReport:
    items: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.items.values())


def theorem_report(spec: ExtensionSpec) -> TheoremReport:
    """
    Evaluate the canonical-form statements on a spec

    - triangular: shape_check passes
    - nilindependent: the A diagonals are independent
    - commuting: [A^a, A^b] = 0 and [A^a, B^b] = 0
    - b_equals_minus_a: A + B vanishes off column 1n, including the 1n diagonal
    - lie_type_rule: if some A^g_{1n,1n} != 0, the algebra is Lie once sigma is eliminated
    - off_diagonal_rule: off-diagonal entries only where every A^b has equal diagonals
    """
    report = TheoremReport()
    report.items["triangular"] = shape_check(spec)
    try:
        report.items["nilindependent"] = nilindependent(spec.A)
    except ValueError as e:
        report.items["nilindependent"] = False
        report.notes.append(str(e))
    defects = commutators(spec)
    report.items["commuting"] = not defects
    for d in defects:
        report.notes.append(f"[{d.kind[0]}{d.alpha}, {d.kind[1]}{d.beta}] != 0")
    report.items["b_equals_minus_a"] = not residuals_4(spec).families["5"] and all(
        a[spec.r - 1, spec.r - 1] == -b[spec.r - 1, spec.r - 1] for a, b in zip(spec.A, spec.B)
    )
    center = spec.r - 1
    if any(a[center, center] != 0 for a in spec.A):
        report.items["lie_type_rule"] = is_lie(build_L(eliminate_sigma(spec)))
    else:
        report.items["lie_type_rule"] = True
        report.notes.append("lie_type_rule holds vacuously: every A^a vanishes at 1n")
    violations = off_diagonal_violations(spec)
    report.items["off_diagonal_rule"] = not violations
    report.notes += [f"off-diagonal entry with unequal diagonals: {v}" for v in violations]
    return report
