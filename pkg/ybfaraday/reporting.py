"""HTML report comparing computed anchors with the quoted measurement values.

Usage:
    python -m ybfaraday report --out reports/anchors.html
"""

from __future__ import annotations

import html
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

from pydantic import BaseModel, Field

from ybfaraday.experiments.beam import beam_estimates
from ybfaraday.experiments.fort import fort_column, larmor_frequency, photon_pressure_estimates
from ybfaraday.experiments.mot import expansion_velocity, probed_atom_number
from ybfaraday.models.atom import IsotopeSpec
from ybfaraday.models.scenario import BeamScenario, FortScenario, MotReleaseScenario
from ybfaraday.physics.atomdata import isotope_by_mass, read_isotope_table, transition_constants
from ybfaraday.physics.faraday import (
    CoefficientReport,
    rotation_spin_half,
    stretched_coefficient_report,
)
from ybfaraday.utils.units import TWO_PI, si_to_mw_per_mm2

logger = logging.getLogger(__name__)


class AnchorCheck(BaseModel):
    """One computed quantity next to its quoted value."""

    name: str = Field(..., description="What is compared")
    unit: str = Field(default="", description="Display unit")
    computed: float = Field(..., description="Value from the toolkit")
    quoted: float = Field(..., description="Quoted value")
    rel_tol: float = Field(..., ge=0.0, description="Accepted relative deviation")
    order_of_magnitude: bool = Field(
        default=False, description="Compare only within a factor of ten"
    )

    @property
    def deviation(self) -> float:
        return abs(self.computed - self.quoted) / abs(self.quoted)

    @property
    def passed(self) -> bool:
        if self.order_of_magnitude:
            return abs(math.log10(abs(self.computed) / abs(self.quoted))) < 1.0
        return self.deviation <= self.rel_tol


def compute_anchors(isotopes: Optional[Sequence[IsotopeSpec]] = None) -> List[AnchorCheck]:
    """Evaluate every quoted scalar with the default scenarios."""
    table = list(isotopes) if isotopes is not None else read_isotope_table()
    consts = transition_constants()
    yb171 = isotope_by_mass(table, 171)
    line = yb171.line_center(Fraction(3, 2))
    gamma = consts.gamma

    mot = MotReleaseScenario()
    fort = FortScenario()
    beam = BeamScenario(isotopes=table)
    pressure = photon_pressure_estimates(fort, consts)
    transit = beam_estimates(beam, consts)
    per_column_near = abs(rotation_spin_half(1.0, 1.0, line + mot.probe_detuning, yb171, gamma, consts))
    per_column_far = abs(rotation_spin_half(1.0, 1.0, line + fort.probe_detuning, yb171, gamma, consts))
    mot_column = float(mot.initial_od / mot.line_factor)

    return [
        AnchorCheck(name="sigma0", unit="m^2", computed=consts.sigma0, quoted=7.598e-14, rel_tol=1e-3),
        AnchorCheck(
            name="saturation intensity",
            unit="mW/mm^2",
            computed=si_to_mw_per_mm2(consts.i_sat),
            quoted=0.60,
            rel_tol=0.02,
        ),
        AnchorCheck(
            name="phi/(p N sigma0 L) at +160 MHz",
            computed=per_column_near,
            quoted=3.0e-2,
            rel_tol=0.02,
        ),
        AnchorCheck(
            name="phi/(p N sigma0 L) at +1.6 GHz",
            computed=per_column_far,
            quoted=3.8e-4,
            rel_tol=0.03,
        ),
        AnchorCheck(
            name="FORT scattering rate",
            unit="1/s",
            computed=pressure.scattering_rate,
            quoted=8.7e3,
            rel_tol=0.05,
        ),
        AnchorCheck(
            name="photon-pressure acceleration",
            unit="m/s^2",
            computed=pressure.acceleration,
            quoted=51.0,
            rel_tol=0.05,
        ),
        AnchorCheck(
            name="hold time", unit="s", computed=pressure.hold_time, quoted=6e-3, rel_tol=0.10
        ),
        AnchorCheck(
            name="Larmor frequency",
            unit="kHz",
            computed=larmor_frequency(fort.field, fort.gyromagnetic) / TWO_PI / 1e3,
            quoted=2.6,
            rel_tol=0.02,
        ),
        AnchorCheck(
            name="FORT N sigma0 L",
            computed=fort_column(fort.atom_count, fort.probe_waist, consts.sigma0),
            quoted=2e2,
            rel_tol=0.15,
        ),
        AnchorCheck(
            name="MOT N sigma0 L",
            computed=mot_column,
            quoted=7.5e-2,
            rel_tol=1e-9,
        ),
        AnchorCheck(
            name="MOT probed atom number",
            computed=probed_atom_number(mot_column, mot.probe_waist, consts.sigma0),
            quoted=7e5,
            rel_tol=0.15,
        ),
        AnchorCheck(
            name="MOT expansion velocity",
            unit="m/s",
            computed=expansion_velocity(mot.probe_waist, mot.decay_time),
            quoted=0.2,
            rel_tol=0.15,
        ),
        AnchorCheck(
            name="beam transit time",
            unit="s",
            computed=transit.transit_time,
            quoted=0.9e-6,
            rel_tol=0.10,
        ),
        AnchorCheck(
            name="beam scattering count r*T",
            computed=transit.scattering_count,
            quoted=4e1,
            rel_tol=1.0,
            order_of_magnitude=True,
        ),
    ]


def _esc(x: Any) -> str:
    return html.escape(str(x) if x is not None else "")


def render_report(anchors: List[AnchorCheck], coefficients: CoefficientReport) -> str:
    parts: List[str] = []
    parts.append("<!DOCTYPE html><html><head><meta charset='utf-8'>")
    parts.append("<title>Yb Faraday rotation anchors</title>")
    parts.append(
        "<style>body{font-family:system-ui, -apple-system, Segoe UI, Roboto, sans-serif;padding:20px;}"
        "h1{margin-bottom:0} h2{margin-top:32px} table{border-collapse:collapse;width:100%;margin-top:8px;}"
        "th,td{border:1px solid #ddd;padding:8px;vertical-align:top;} th{background:#fafafa;text-align:left;}"
        ".ok{color:#1a7f37} .bad{color:#cf222e}"
        "</style>"
    )
    parts.append("</head><body>")
    parts.append("<h1>Yb Faraday rotation anchors</h1>")

    passed = sum(a.passed for a in anchors)
    parts.append(f"<p>{passed} of {len(anchors)} anchors within tolerance</p>")
    parts.append(
        "<table><thead><tr><th>Quantity</th><th>Computed</th><th>Quoted</th>"
        "<th>Deviation</th><th>Tolerance</th><th>Status</th></tr></thead><tbody>"
    )
    for a in anchors:
        status = "ok" if a.passed else "off"
        css = "ok" if a.passed else "bad"
        tol = "order of magnitude" if a.order_of_magnitude else f"{a.rel_tol:.0%}"
        parts.append(
            "<tr>"
            f"<td>{_esc(a.name)}</td>"
            f"<td>{a.computed:.4g} {_esc(a.unit)}</td>"
            f"<td>{a.quoted:.4g} {_esc(a.unit)}</td>"
            f"<td>{a.deviation:.1%}</td>"
            f"<td>{_esc(tol)}</td>"
            f"<td class='{css}'>{status}</td>"
            "</tr>"
        )
    parts.append("</tbody></table>")

    parts.append("<h2>Stretched-state coefficients, I=5/2</h2>")
    parts.append(f"<p>Prefactor Gamma/{coefficients.denominator}</p>")
    parts.append("<table><thead><tr><th>F'</th><th>Derived</th><th>Printed</th></tr></thead><tbody>")
    for fp in sorted(coefficients.derived, key=Fraction):
        parts.append(
            f"<tr><td>{_esc(fp)}</td><td>{coefficients.derived[fp]}</td>"
            f"<td>{coefficients.printed.get(fp, 0)}</td></tr>"
        )
    parts.append(
        f"<tr><th>sum</th><th>{coefficients.derived_sum}</th><th>{coefficients.printed_sum}</th></tr>"
    )
    parts.append("</tbody></table>")
    if not coefficients.consistent:
        parts.append(
            "<p class='bad'>The printed set does not vanish when the hyperfine levels are "
            f"degenerate ({coefficients.degenerate_printed:+.4f} Gamma g N sigma0 L); "
            "the derived set is used for all rotation spectra.</p>"
        )
    parts.append("</body></html>")
    return "".join(parts)


def write_report(output: Union[str, Path], isotopes: Optional[Sequence[IsotopeSpec]] = None) -> Path:
    anchors = compute_anchors(isotopes)
    target = Path(output)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(render_report(anchors, stretched_coefficient_report()), encoding="utf-8")
    logger.info(f"Wrote anchor report to {target}")
    return target
