"""Source anchors attached to report entries.

The reports must say which published statement each check exercises.  The
strings live here, as data, so the numerical code stays free of them.
"""

ANCHORS = {
    "non_squeezing": "Thm 1.2",
    "squeezing": "Thm 1.3",
    "small_squeezing": "Thm 1.4",
    "one_dim": "Remark after Thm 1.3",
    "open_window": "Section 1.1, open case",
    "inclusion": "trivial inclusion",
    "capacities": "Thm 1.6",
    "iteration": "proof of Thm 1.3 from Thm 1.11(ii)",
    "corresp": "Section 2.1",
    "twist": "Prop 1.24, Eq. (1.5)",
    "loop_embedding": "Prop 2.1, Example 2.3",
    "squeeze_pair": "Section 3.6",
    "planck": "Section 6.1",
    "fundamental": "Lemma 3.2, Eq. (3.2)",
    "conjugated_rotation": "Eq. (3.3)",
    "shift_params": "Lemma 3.3, Eqs. (3.6)-(3.9)",
    "inclusion_W": "Eq. (3.10)",
    "first_integral": "Eq. (3.11)",
    "distinguished": "Lemma 3.5",
    "main_positivity": "Thm 3.6, Eq. (3.21)",
    "step1": "Eq. (3.17)",
    "step2": "Eq. (3.15)",
    "closure": "Thm 3.6",
    "mu": "Eq. (1.4), Thm 1.11(ii)",
    "s3_loop": "Appendix B, Remark B.1",
    "pipeline": "Section 3.6",
    "maslov": "Section 4.4.1",
    "cz": "Section 4.4.1 with erratum",
    "ellipsoid": "Thm 1.18, Eq. (1.7)",
    "ball_morphism": "Thm 1.19",
    "spectrum": "Section 4.4, Example 5.2",
    "period_action": "Eq. (4.1)",
    "profile": "Section 5.1, Eqs. (5.2)-(5.3)",
    "olshanskii": "Appendix B, Thm B.1, Eq. (B.1)",
    "equivariance": "Example 1.7",
}


def anchor(key: str) -> str:
    return ANCHORS[key]
