"""
Meeting in Damascus: selection versus a locked collider
=======================================================

You and Death each choose a city; ``M`` records whether you meet. Among
survivors the two choices are perfectly anti-correlated, but changing your
city would not have moved Death. If the meeting is fixed in advance, it
would have.
"""

from bellsel import analysis, scm

for constrained in (False, True):
    rep = analysis.counterfactual_support_report("damascus", constrained)
    print(f"constrained={constrained!s:5s} corr={rep['selection_corr']:+.0f} "
          f"movement={rep['far_side_movement']:.0f}  -> {rep['classification']}")

###############################################################################
# The same counterfactual, asked directly of the two models.

free = scm.build_damascus_scm(False)
print(scm.counterfactual_query(free, {"you": "Damascus", "death": "Aleppo", "M": 0},
                               {"you": "Aleppo"}, "death"))
locked = scm.build_damascus_scm(True)
print(scm.ccc_counterfactual(locked, {"you": "Damascus"}, {"you": "Aleppo"}, "death"))
