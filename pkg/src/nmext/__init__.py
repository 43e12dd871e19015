"""Non-malleable extractors, their two-source and t-tampering variants, and
a two-round privacy amplification protocol, with exact brute-force oracles
for checking all of them on micro-sized parameters."""

from .bits import BitString
from .errors import BudgetExceeded, FieldMismatchError, LengthError, NmExtError, ParameterError, PlanError
from .nmext import AdviceString, NmExtTrace, adv_cb, advice_gen, flip_flop, nmext
from .oracle import FlatSource, JointDist, ext_distance, min_entropy_cond, nm_distance, nm_distances, stat_dist
from .plan import ParamPlan, plan_params
from .presets import micro_plan
from .protocol import AdversaryStrategy, MacKey, SessionResult, eval_robustness, mac, run_pa
from .t_tamper import t_2nmext, t_nmext
from .trevisan import ExtSpec, trevisan_ext, weak_design
from .two_source import advice_gen2, two_adv_cb, two_nmext

__all__ = [
    "AdviceString", "AdversaryStrategy", "BitString", "BudgetExceeded", "ExtSpec", "FieldMismatchError",
    "FlatSource", "JointDist", "LengthError", "MacKey", "NmExtError", "NmExtTrace", "ParamPlan",
    "ParameterError", "PlanError", "SessionResult", "adv_cb", "advice_gen", "advice_gen2", "eval_robustness",
    "ext_distance", "flip_flop", "mac", "micro_plan", "min_entropy_cond", "nm_distance", "nm_distances",
    "nmext", "plan_params", "run_pa", "stat_dist", "t_2nmext", "t_nmext", "trevisan_ext", "two_adv_cb",
    "two_nmext", "weak_design",
]
