import pytest

from ybfaraday.physics.faraday import stretched_coefficient_report
from ybfaraday.reporting import AnchorCheck, compute_anchors, render_report, write_report


def test_all_anchors_within_tolerance(table):
    anchors = compute_anchors(table)
    failed = [(a.name, a.computed, a.quoted) for a in anchors if not a.passed]
    assert failed == []
    assert len(anchors) == 14


def test_anchor_check_tolerances():
    close = AnchorCheck(name="x", computed=1.01, quoted=1.0, rel_tol=0.02)
    far = AnchorCheck(name="x", computed=1.05, quoted=1.0, rel_tol=0.02)
    rough = AnchorCheck(name="x", computed=14.0, quoted=40.0, rel_tol=1.0, order_of_magnitude=True)
    assert close.passed
    assert close.deviation == pytest.approx(0.01)
    assert not far.passed
    assert rough.passed
    assert not AnchorCheck(
        name="x", computed=1.0, quoted=40.0, rel_tol=1.0, order_of_magnitude=True
    ).passed


def test_rendered_report(table):
    page = render_report(compute_anchors(table), stretched_coefficient_report())
    assert page.startswith("<!DOCTYPE html>")
    assert "14 of 14 anchors within tolerance" in page
    assert "Stretched-state coefficients" in page
    assert "<td>5/2</td><td>-3</td><td>-6</td>" in page
    assert "does not vanish" in page


def test_write_report(tmp_path, table):
    target = write_report(tmp_path / "reports" / "anchors.html", table)
    assert target.exists()
    assert "sigma0" in target.read_text(encoding="utf-8")
