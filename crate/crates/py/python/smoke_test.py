"""Smoke test for the designlint Python bindings.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

import json
from pathlib import Path

import designlint_py as dl

FIXTURES = Path(__file__).resolve().parents[2] / "core" / "tests" / "fixtures"


def main() -> None:
    assert abs(dl.apca_lc("#000000", "#ffffff") - 106.04) < 0.01
    assert abs(dl.apca_lc("#ffffff", "#000000") + 107.88) < 0.01

    palette = json.loads(dl.generate_palette("#6750a4"))
    assert palette["mode"] == "light"

    clean = dl.PageSnapshot.from_html((FIXTURES / "clean.html").read_text(), "clean.html")
    assert not clean.rendered
    assert dl.audit(clean).issue_count == 0

    site = dl.PageSnapshot.from_html(
        (FIXTURES / "sites" / "travel_blog.html").read_text(), "travel_blog.html"
    )
    before = dl.audit(site)
    categories = {c for c, _ in before.issues()}
    assert {"font_size", "color_contrast"} <= categories, categories

    fixed = site.apply_css_patch(before.fix_all_patch())
    after = dl.audit(fixed)
    summary = json.loads(dl.diff_reports(before, after))
    assert summary["introduced"] == [], summary["introduced"]
    assert after.issue_count < before.issue_count

    html = before.to_html()
    assert html.count("<h1") == 1 and "<script" not in html

    w1 = dl.PageSnapshot.from_json((FIXTURES / "w1.snapshot.json").read_text())
    assert w1.rendered and dl.audit(w1).issue_count > 0

    print(f"ok: {before.issue_count} issues before, {after.issue_count} after the fix-all patch")


if __name__ == "__main__":
    main()
