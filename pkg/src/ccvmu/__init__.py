"""Workbench for a complete call-by-value lambda-mu calculus.

Terms modulo two associativity axioms, the ten-rule reduction on equality
classes, the sight ordinal for the mu fragment, CPS translations into a
four-sorted target calculus (including the reduction-preserving one with
the dot operator), and union-intersection / strict intersection typing
with derivation checking and transport.
"""

from .terms import (Var, Lam, App, Let, Mu, Jmp, JLet, Term, Jump, Node,
                    canonicalize, ccv_eq, representatives, is_value,
                    free_names, subst_value, subst_coname, subst_jump_context,
                    alpha_normalize, ClassSizeExceeded)
from .reduce import Rule, ALL_RULES, MU_FRAGMENT, ReductionStep, one_step, reducts, is_sn, trace
from .verdicts import SN, NotSN, Unknown, SnVerdict
from .measure import (Place, PlaceAnalysis, analyze, places, vision, breadth,
                      sight, Sight, ordinal_lt, natural_sum, verify_sight_decrease)
from .target import (TVar, TLam, TApp, Dot, TTerm, dot, sort_check,
                     step_tgt, is_sn_tgt, joinable)
from .cps import (cps_standard, cps_colon, colon, cps_standard_mod, tilde,
                  TildeEnv, SnTranslator, sn_translate, sn_translate_jump,
                  Hole, AppL, AppR, LetArg, plug, build_eval_ctx,
                  e_depth, e_depth_path, check_one_step_simulation)
from .types_ccv import (CAtom, CArrow, CInter, CUnion, BOT_CCV, inter, union,
                        subtype_ccv, CcvJudgment, CcvDerivation, check_ccv)
from .types_target import (SAtom, SArrow, SInter, BOT, sinter, subtype_tgt,
                           TgtJudgment, TgtDerivation, check_tgt, infer_nf,
                           expand_subject, type_sn)
from .transport import translate_type, tr_raw, tr_inter, tr_plus, transport_aei16
from .syntax import parse_term, parse_node, parse_target, print_term, print_target
from .corpus import enumerate_terms, enumerate_target, random_terms
from .suites import SUITES, run_suite

__version__ = "0.1.0"
