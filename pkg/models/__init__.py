from .operator_d import AnalyticInput, eval_D, eval_D_from_p, eval_D_from_phi
from .certifier import GridSpec, MembershipVerdict, certify, default_grid
from .radius_solver import positivity_radius, scan_circle, verify_theorem
